#include "amdet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "amdet/transforms.hpp"

namespace amdet {

RankedSolutions rank_solutions(const SampleSet& s, std::span<const uint8_t> truth_bits,
                               const Constellation& c) {
  if (s.records.empty()) throw std::invalid_argument("rank_solutions: empty sample set");

  std::vector<const SampleRecord*> order;
  order.reserve(s.records.size());
  for (const auto& r : s.records) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](const SampleRecord* a, const SampleRecord* b) {
    if (a->energy != b->energy) return a->energy < b->energy;
    return a->spins < b->spins;  // ties split into consecutive ranks
  });

  long long total = 0;
  for (const auto* r : order) total += r->count;

  RankedSolutions out;
  out.n_bits = static_cast<int>(truth_bits.size());
  for (const auto* r : order) {
    const std::vector<uint8_t> solver_bits = spins_to_bits(r->spins);
    std::vector<uint8_t> decoded = decode_bits(solver_bits, c);
    if (decoded.size() != truth_bits.size())
      throw std::invalid_argument("rank_solutions: solution width != truth width");
    int errs = 0;
    for (size_t i = 0; i < decoded.size(); ++i) errs += decoded[i] != truth_bits[i];
    out.p.push_back(static_cast<double>(r->count) / total);
    out.bit_errors.push_back(errs);
    out.energy.push_back(r->energy);
    out.bits.push_back(std::move(decoded));
  }
  const double e1 = out.energy.front();
  for (double e : out.energy)
    out.delta_e.push_back(e1 != 0.0 ? (e - e1) / std::abs(e1) : e - e1);
  return out;
}

double tts(double p0, double t_us, double target) {
  if (p0 < 0.0 || p0 > 1.0) throw std::invalid_argument("tts: p0 must lie in [0, 1]");
  if (!(target > 0.0) || target >= 1.0) throw std::invalid_argument("tts: target in (0, 1)");
  if (p0 == 0.0) return std::numeric_limits<double>::infinity();
  if (p0 >= target) return t_us;  // at least one anneal
  return t_us * std::log1p(-target) / std::log1p(-p0);
}

double expected_ber(const RankedSolutions& r, long long n_a) {
  if (n_a < 1) throw std::invalid_argument("expected_ber: n_a >= 1 required");
  const int l = r.n_ranks();
  // Suffix masses S_k = sum_{r >= k} p_r; best-of-n lands on rank k with
  // probability S_k^n - S_{k+1}^n.
  std::vector<double> suffix(l + 1, 0.0);
  for (int k = l - 1; k >= 0; --k) suffix[k] = suffix[k + 1] + r.p[k];
  double ber = 0.0;
  for (int k = 0; k < l; ++k) {
    const double hi = std::pow(suffix[k], static_cast<double>(n_a));
    const double lo = std::pow(suffix[k + 1], static_cast<double>(n_a));
    ber += (hi - lo) * r.bit_errors[k] / r.n_bits;
  }
  return ber;
}

TtbResult ttb(const RankedSolutions& r, double target_ber, double t_a_us, double t_p_us,
              long long p_f) {
  if (p_f < 1) throw std::invalid_argument("ttb: p_f >= 1 required");
  TtbResult out;
  out.asymptote = static_cast<double>(r.bit_errors.front()) / r.n_bits;
  const double per_anneal = (t_a_us + t_p_us) / static_cast<double>(p_f);

  if (expected_ber(r, 1) <= target_ber) {
    out.reachable = true;
    out.n_a = 1;
    out.time_us = per_anneal;
    return out;
  }
  if (out.asymptote > target_ber) {
    out.reachable = false;
    out.time_us = std::numeric_limits<double>::infinity();
    return out;
  }
  // Doubling then bisection on the (monotone) expected-BER curve.
  long long lo = 1, hi = 2;
  constexpr long long kMaxAnneals = 1LL << 40;
  while (expected_ber(r, hi) > target_ber) {
    lo = hi;
    hi *= 2;
    if (hi > kMaxAnneals) {
      out.reachable = false;
      out.time_us = std::numeric_limits<double>::infinity();
      return out;
    }
  }
  while (lo + 1 < hi) {
    const long long mid = lo + (hi - lo) / 2;
    if (expected_ber(r, mid) <= target_ber)
      hi = mid;
    else
      lo = mid;
  }
  out.reachable = true;
  out.n_a = hi;
  out.time_us = static_cast<double>(hi) * per_anneal;
  return out;
}

double fer(double ber, long long frame_bits) {
  if (ber < 0.0 || ber > 1.0) throw std::invalid_argument("fer: ber must lie in [0, 1]");
  if (frame_bits < 0) throw std::invalid_argument("fer: frame_bits >= 0 required");
  // 1 - (1-ber)^frame_bits, computed stably for small ber.
  return -std::expm1(static_cast<double>(frame_bits) * std::log1p(-ber));
}

}  // namespace amdet
