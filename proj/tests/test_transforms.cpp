#include "amdet/transforms.hpp"

#include <map>
#include <set>

#include "gtest/gtest.h"

using namespace amdet;

namespace {

const Constellation& bpsk() { return Constellation::get(Modulation::Bpsk); }
const Constellation& qpsk() { return Constellation::get(Modulation::Qpsk); }
const Constellation& qam16() { return Constellation::get(Modulation::Qam16); }

std::vector<uint8_t> tuple_bits(size_t idx, int q) {
  std::vector<uint8_t> bits(q);
  for (int b = 0; b < q; ++b) bits[b] = (idx >> (q - 1 - b)) & 1u;
  return bits;
}

std::vector<uint8_t> translated(std::vector<uint8_t> t, const Constellation& c) {
  post_translate(t, c);
  return t;
}

}  // namespace

TEST(SolverSymbol, KnownValues) {
  EXPECT_EQ(solver_symbol(std::vector<uint8_t>{1}, bpsk()), cxd(1, 0));
  EXPECT_EQ(solver_symbol(std::vector<uint8_t>{0}, bpsk()), cxd(-1, 0));
  EXPECT_EQ(solver_symbol(std::vector<uint8_t>{0, 0}, qpsk()), cxd(-1, -1));
  EXPECT_EQ(solver_symbol(std::vector<uint8_t>{0, 0, 1, 1}, qam16()), cxd(-3, 3));
  EXPECT_EQ(solver_symbol(std::vector<uint8_t>{1, 1, 1, 1}, qam16()), cxd(3, 3));
}

TEST(SolverSymbol, TupleLengthChecked) {
  EXPECT_THROW(solver_symbol(std::vector<uint8_t>{1, 0}, bpsk()), std::invalid_argument);
  EXPECT_THROW(solver_symbol(std::vector<uint8_t>{1}, qam16()), std::invalid_argument);
}

TEST(PostTranslate, QuotedChain) {
  // 1100 -> intermediate 1111 -> gray 1000.
  std::vector<uint8_t> t{1, 1, 0, 0};
  flip_even_columns(t, qam16());
  EXPECT_EQ(t, (std::vector<uint8_t>{1, 1, 1, 1}));
  EXPECT_EQ(translated({1, 1, 0, 0}, qam16()), (std::vector<uint8_t>{1, 0, 0, 0}));
}

TEST(PostTranslate, FixedPoints) {
  EXPECT_EQ(translated({0, 0, 0, 0}, qam16()), (std::vector<uint8_t>{0, 0, 0, 0}));
  EXPECT_EQ(translated({0, 1}, qpsk()), (std::vector<uint8_t>{0, 1}));
  EXPECT_EQ(translated({1}, bpsk()), (std::vector<uint8_t>{1}));
}

// The central consistency relation: whenever the solver transform lands on a
// constellation point, the post-translation recovers that point's Gray bits.
// Exhaustive over all tuples of every modulation.
TEST(PostTranslate, RoundTripWithGrayMap) {
  for (Modulation m : {Modulation::Bpsk, Modulation::Qpsk, Modulation::Qam16}) {
    const Constellation& c = Constellation::get(m);
    const int q = c.bits_per_symbol();
    for (size_t idx = 0; idx < (size_t{1} << q); ++idx) {
      const auto solver_bits = tuple_bits(idx, q);
      const cxd symbol = solver_symbol(solver_bits, c);
      EXPECT_EQ(translated(solver_bits, c), c.demap_symbol(symbol))
          << to_string(m) << " tuple " << idx;
    }
  }
}

TEST(PostTranslate, IsBijection) {
  for (Modulation m : {Modulation::Bpsk, Modulation::Qpsk, Modulation::Qam16}) {
    const Constellation& c = Constellation::get(m);
    const int q = c.bits_per_symbol();
    std::set<std::vector<uint8_t>> image;
    for (size_t idx = 0; idx < (size_t{1} << q); ++idx)
      image.insert(translated(tuple_bits(idx, q), c));
    EXPECT_EQ(image.size(), size_t{1} << q);
  }
}

// The intermediate code mirrors even constellation columns top-to-bottom:
// grid position of the flipped tuple equals the original position with the
// quadrature index reversed, exactly on columns 2 and 4.
TEST(PostTranslate, EvenColumnFlip) {
  const Constellation& c = qam16();
  for (size_t idx = 0; idx < 16; ++idx) {
    const auto bits = tuple_bits(idx, 4);
    const cxd before = solver_symbol(bits, c);
    auto flipped = bits;
    flip_even_columns(flipped, c);
    const cxd after = solver_symbol(flipped, c);
    EXPECT_EQ(after.real(), before.real());
    const int column = static_cast<int>((before.real() + 3) / 2);  // 0..3
    if (column % 2 == 1)
      EXPECT_EQ(after.imag(), -before.imag()) << "column " << column;
    else
      EXPECT_EQ(after.imag(), before.imag()) << "column " << column;
  }
}

TEST(DecodeBits, PerSenderIndependent) {
  // Two senders translate independently of each other; verified against the
  // exhaustive one-sender table.
  std::map<std::vector<uint8_t>, std::vector<uint8_t>> table;
  for (size_t idx = 0; idx < 16; ++idx) {
    const auto bits = tuple_bits(idx, 4);
    table[bits] = translated(bits, qam16());
  }
  for (size_t a = 0; a < 16; ++a)
    for (size_t b = 0; b < 16; ++b) {
      std::vector<uint8_t> joint = tuple_bits(a, 4);
      const auto tb = tuple_bits(b, 4);
      joint.insert(joint.end(), tb.begin(), tb.end());
      std::vector<uint8_t> expect = table[tuple_bits(a, 4)];
      const auto& second = table[tb];
      expect.insert(expect.end(), second.begin(), second.end());
      EXPECT_EQ(decode_bits(joint, qam16()), expect);
    }
}

TEST(DecodeBits, BpskPassThrough) {
  EXPECT_EQ(decode_bits(std::vector<uint8_t>{0, 1, 1}, bpsk()),
            (std::vector<uint8_t>{0, 1, 1}));
}

TEST(DecodeBits, SingleSenderExample) {
  EXPECT_EQ(decode_bits(std::vector<uint8_t>{1, 1, 0, 0}, qam16()),
            (std::vector<uint8_t>{1, 0, 0, 0}));
}

TEST(DecodeBits, LengthChecked) {
  EXPECT_THROW(decode_bits(std::vector<uint8_t>{0, 1, 1}, qpsk()), std::invalid_argument);
}
