#include "amdet/constellation.hpp"

#include <limits>
#include <stdexcept>

namespace amdet {

namespace {

// Gray-labeled 4-PAM axis: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
double gray_pam4(uint8_t hi, uint8_t lo) {
  static constexpr double levels[4] = {-3.0, -1.0, +3.0, +1.0};  // index = hi<<1|lo
  return levels[(hi << 1) | lo];
}

size_t tuple_index(std::span<const uint8_t> bits) {
  size_t idx = 0;
  for (uint8_t b : bits) idx = (idx << 1) | (b & 1u);
  return idx;
}

}  // namespace

Modulation modulation_from_string(std::string_view name) {
  if (name == "bpsk") return Modulation::Bpsk;
  if (name == "qpsk") return Modulation::Qpsk;
  if (name == "qam16" || name == "16qam") return Modulation::Qam16;
  throw config_error("unknown modulation: " + std::string(name));
}

std::string_view to_string(Modulation m) {
  switch (m) {
    case Modulation::Bpsk: return "bpsk";
    case Modulation::Qpsk: return "qpsk";
    case Modulation::Qam16: return "qam16";
  }
  return "?";
}

Constellation::Constellation(Modulation kind, int q, double avg_energy)
    : kind_(kind), q_(q), avg_energy_(avg_energy) {
  const size_t size = size_t{1} << q_;
  symbols_.resize(size);
  for (size_t idx = 0; idx < size; ++idx) {
    std::vector<uint8_t> bits(q_);
    for (int b = 0; b < q_; ++b) bits[b] = (idx >> (q_ - 1 - b)) & 1u;
    switch (kind_) {
      case Modulation::Bpsk:
        symbols_[idx] = cxd(2.0 * bits[0] - 1.0, 0.0);
        break;
      case Modulation::Qpsk:
        symbols_[idx] = cxd(2.0 * bits[0] - 1.0, 2.0 * bits[1] - 1.0);
        break;
      case Modulation::Qam16:
        symbols_[idx] = cxd(gray_pam4(bits[0], bits[1]), gray_pam4(bits[2], bits[3]));
        break;
    }
  }
}

const Constellation& Constellation::get(Modulation m) {
  static const Constellation bpsk(Modulation::Bpsk, 1, 1.0);
  static const Constellation qpsk(Modulation::Qpsk, 2, 2.0);
  static const Constellation qam16(Modulation::Qam16, 4, 10.0);
  switch (m) {
    case Modulation::Bpsk: return bpsk;
    case Modulation::Qpsk: return qpsk;
    case Modulation::Qam16: return qam16;
  }
  throw std::invalid_argument("bad modulation enum");
}

cxd Constellation::map_bits(std::span<const uint8_t> bits) const {
  if (static_cast<int>(bits.size()) != q_)
    throw std::invalid_argument("map_bits: tuple length != bits per symbol");
  return symbols_[tuple_index(bits)];
}

std::vector<uint8_t> Constellation::demap_symbol(cxd symbol) const {
  for (size_t idx = 0; idx < symbols_.size(); ++idx) {
    if (symbols_[idx] == symbol) {
      std::vector<uint8_t> bits(q_);
      for (int b = 0; b < q_; ++b) bits[b] = (idx >> (q_ - 1 - b)) & 1u;
      return bits;
    }
  }
  throw std::invalid_argument("demap_symbol: not a constellation point");
}

cxd Constellation::slice(cxd x) const {
  cxd best = symbols_[0];
  double best_d = std::numeric_limits<double>::infinity();
  for (const cxd& s : symbols_) {
    const double d = std::norm(x - s);
    if (d < best_d) {
      best_d = d;
      best = s;
    }
  }
  return best;
}

}  // namespace amdet
