#include "amdet/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace amdet {

ChannelKind channel_kind_from_string(std::string_view name) {
  if (name == "phase" || name == "unit-phase") return ChannelKind::UnitGainRandomPhase;
  if (name == "rayleigh") return ChannelKind::RayleighIid;
  if (name == "trace") return ChannelKind::Trace;
  throw config_error("unknown channel model: " + std::string(name));
}

std::string_view to_string(ChannelKind k) {
  switch (k) {
    case ChannelKind::UnitGainRandomPhase: return "phase";
    case ChannelKind::RayleighIid: return "rayleigh";
    case ChannelKind::Trace: return "trace";
  }
  return "?";
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  return out;
}

[[noreturn]] void fail(const std::string& name, int line_no, const std::string& what) {
  throw parse_error(name + ":" + std::to_string(line_no) + ": " + what);
}

double parse_field(const std::string& name, int line_no, const std::string& field,
                   const std::string& text) {
  size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    fail(name, line_no, "field '" + field + "' is not a number: '" + text + "'");
  }
  if (pos != text.size()) fail(name, line_no, "trailing junk in field '" + field + "'");
  if (!std::isfinite(v)) fail(name, line_no, "field '" + field + "' is not finite");
  return v;
}

}  // namespace

ChannelTrace ChannelTrace::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(path + ": cannot open trace file");
  return parse(in, path);
}

ChannelTrace ChannelTrace::parse(std::istream& in, const std::string& name) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) fail(name, 1, "empty trace file");
  ++line_no;
  // Tolerate a UTF-8 BOM and trailing CR.
  if (line.size() >= 3 && line.compare(0, 3, "\xef\xbb\xbf") == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "use,rx,tx,re,im")
    fail(name, 1, "expected header 'use,rx,tx,re,im', got '" + line + "'");

  struct Cell { double re, im; };
  std::map<int, std::map<std::pair<int, int>, Cell>> grid;
  int max_rx = -1, max_tx = -1, max_use = -1;
  int rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != 5) fail(name, line_no, "expected 5 fields");
    const double use_d = parse_field(name, line_no, "use", fields[0]);
    const double rx_d = parse_field(name, line_no, "rx", fields[1]);
    const double tx_d = parse_field(name, line_no, "tx", fields[2]);
    const double re = parse_field(name, line_no, "re", fields[3]);
    const double im = parse_field(name, line_no, "im", fields[4]);
    const int use = static_cast<int>(use_d);
    const int rx = static_cast<int>(rx_d);
    const int tx = static_cast<int>(tx_d);
    if (use_d != use || use < 0) fail(name, line_no, "field 'use' must be a non-negative integer");
    if (rx_d != rx || rx < 0) fail(name, line_no, "field 'rx' must be a non-negative integer");
    if (tx_d != tx || tx < 0) fail(name, line_no, "field 'tx' must be a non-negative integer");
    auto [it, inserted] = grid[use].try_emplace({rx, tx}, Cell{re, im});
    if (!inserted) fail(name, line_no, "duplicate entry for (use,rx,tx)");
    max_use = std::max(max_use, use);
    max_rx = std::max(max_rx, rx);
    max_tx = std::max(max_tx, tx);
    ++rows;
  }
  if (rows == 0) fail(name, line_no, "trace file has a header but no data rows");

  ChannelTrace trace;
  trace.n_rx_ = max_rx + 1;
  trace.n_tx_ = max_tx + 1;
  trace.uses_.reserve(max_use + 1);
  for (int u = 0; u <= max_use; ++u) {
    auto it = grid.find(u);
    if (it == grid.end())
      throw parse_error(name + ": channel use " + std::to_string(u) + " is missing");
    CMat h(trace.n_rx_, trace.n_tx_);
    for (int r = 0; r < trace.n_rx_; ++r)
      for (int c = 0; c < trace.n_tx_; ++c) {
        auto cell = it->second.find({r, c});
        if (cell == it->second.end())
          throw parse_error(name + ": use " + std::to_string(u) + " is missing entry (rx=" +
                            std::to_string(r) + ",tx=" + std::to_string(c) + ")");
        h(r, c) = cxd(cell->second.re, cell->second.im);
      }
    trace.uses_.push_back(std::move(h));
  }
  return trace;
}

CVec modulate(std::span<const uint8_t> bits, const Constellation& c) {
  const int q = c.bits_per_symbol();
  if (bits.size() % q != 0)
    throw std::invalid_argument("modulate: bit count not divisible by bits per symbol");
  const int n = static_cast<int>(bits.size()) / q;
  CVec v(n);
  for (int i = 0; i < n; ++i)
    v(i) = c.map_bits(bits.subspan(static_cast<size_t>(i) * q, q));
  return v;
}

CMat gen_channel(const ChannelModel& model, int n_t, int n_r, Rng& rng) {
  if (n_t < 1 || n_r < n_t)
    throw std::invalid_argument("gen_channel: need n_r >= n_t >= 1");
  switch (model.kind) {
    case ChannelKind::UnitGainRandomPhase: {
      CMat h(n_r, n_t);
      for (int r = 0; r < n_r; ++r)
        for (int c = 0; c < n_t; ++c) {
          const double theta = 2.0 * std::numbers::pi * rng.uniform();
          h(r, c) = cxd(std::cos(theta), std::sin(theta));
        }
      return h;
    }
    case ChannelKind::RayleighIid: {
      // Unit-variance complex Gaussian entries: Re, Im ~ N(0, 1/2).
      const double s = std::sqrt(0.5);
      CMat h(n_r, n_t);
      for (int r = 0; r < n_r; ++r)
        for (int c = 0; c < n_t; ++c) h(r, c) = cxd(rng.gaussian(0, s), rng.gaussian(0, s));
      return h;
    }
    case ChannelKind::Trace: {
      if (!model.trace) throw config_error("trace channel model without a loaded trace");
      const ChannelTrace& t = *model.trace;
      if (n_r > t.n_rx() || n_t > t.n_tx())
        throw config_error("trace has " + std::to_string(t.n_rx()) + "x" +
                           std::to_string(t.n_tx()) + " antennas; requested " +
                           std::to_string(n_r) + "x" + std::to_string(n_t));
      const CMat& full = t.use(rng.uniform_int(0, t.n_uses() - 1));
      // Sample receive rows without replacement; take the first n_t columns.
      std::vector<int> rows(t.n_rx());
      for (int i = 0; i < t.n_rx(); ++i) rows[i] = i;
      for (int i = 0; i < n_r; ++i) {
        const int j = rng.uniform_int(i, t.n_rx() - 1);
        std::swap(rows[i], rows[j]);
      }
      CMat h(n_r, n_t);
      for (int r = 0; r < n_r; ++r)
        for (int c = 0; c < n_t; ++c) h(r, c) = full(rows[r], c);
      return h;
    }
  }
  throw std::invalid_argument("bad channel kind");
}

CVec transmit(const CMat& h, const CVec& v, double snr_db, Rng& rng) {
  if (h.cols() != v.size())
    throw std::invalid_argument("transmit: dimension mismatch between H and v");
  CVec y = h * v;
  if (snr_db == kNoiseless) return y;
  const double snr = std::pow(10.0, snr_db / 10.0);
  const int n_r = static_cast<int>(h.rows());
  // Per-antenna noise power such that ||Hv||^2 / E||n||^2 == snr.
  const double sigma2 = y.squaredNorm() / (snr * n_r);
  const double s = std::sqrt(sigma2 / 2.0);
  for (int r = 0; r < n_r; ++r) y(r) += cxd(rng.gaussian(0, s), rng.gaussian(0, s));
  return y;
}

std::vector<uint8_t> random_bits(int n, Rng& rng) {
  std::vector<uint8_t> bits(n);
  for (auto& b : bits) b = rng.coin() ? 1 : 0;
  return bits;
}

ChannelUse make_channel_use(const ChannelModel& model, const Constellation& c,
                            int n_t, int n_r, double snr_db, uint64_t seed) {
  Rng rng(seed);
  ChannelUse use;
  use.seed = seed;
  use.snr_db = snr_db;
  use.h = gen_channel(model, n_t, n_r, rng);
  use.tx_bits = random_bits(n_t * c.bits_per_symbol(), rng);
  use.tx_symbols = modulate(use.tx_bits, c);
  use.y = transmit(use.h, use.tx_symbols, snr_db, rng);
  return use;
}

}  // namespace amdet
