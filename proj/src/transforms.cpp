#include "amdet/transforms.hpp"

#include <stdexcept>

namespace amdet {

namespace {

void check_tuple(size_t got, const Constellation& c) {
  if (static_cast<int>(got) != c.bits_per_symbol())
    throw std::invalid_argument("tuple length != bits per symbol");
}

}  // namespace

cxd solver_symbol(std::span<const uint8_t> tuple, const Constellation& c) {
  check_tuple(tuple.size(), c);
  switch (c.kind()) {
    case Modulation::Bpsk:
      return cxd(2.0 * tuple[0] - 1.0, 0.0);
    case Modulation::Qpsk:
      return cxd(2.0 * tuple[0] - 1.0, 2.0 * tuple[1] - 1.0);
    case Modulation::Qam16:
      return cxd(4.0 * tuple[0] + 2.0 * tuple[1] - 3.0,
                 4.0 * tuple[2] + 2.0 * tuple[3] - 3.0);
  }
  throw std::invalid_argument("bad modulation enum");
}

void flip_even_columns(std::span<uint8_t> tuple, const Constellation& c) {
  check_tuple(tuple.size(), c);
  if (c.kind() != Modulation::Qam16) return;
  if (tuple[1]) {
    tuple[2] ^= 1u;
    tuple[3] ^= 1u;
  }
}

void post_translate(std::span<uint8_t> tuple, const Constellation& c) {
  check_tuple(tuple.size(), c);
  if (c.kind() != Modulation::Qam16) return;  // identity below 16-QAM
  flip_even_columns(tuple, c);
  uint8_t prev = tuple[0];
  for (size_t k = 1; k < tuple.size(); ++k) {
    const uint8_t cur = tuple[k];
    tuple[k] = prev ^ cur;
    prev = cur;
  }
}

std::vector<uint8_t> decode_bits(std::span<const uint8_t> solver_bits,
                                 const Constellation& c) {
  const int q = c.bits_per_symbol();
  if (solver_bits.size() % q != 0)
    throw std::invalid_argument("decode_bits: length not a multiple of bits per symbol");
  std::vector<uint8_t> out(solver_bits.begin(), solver_bits.end());
  for (size_t off = 0; off < out.size(); off += q)
    post_translate(std::span<uint8_t>(out.data() + off, q), c);
  return out;
}

}  // namespace amdet
