#include "amdet/ising.hpp"

#include "amdet/rng.hpp"
#include "gtest/gtest.h"

using namespace amdet;

namespace {

IsingProblem random_ising(int n, uint64_t seed, double offset = 0.0) {
  Rng rng(seed);
  IsingProblem p = IsingProblem::zeros(n);
  for (auto& f : p.f) f = 2.0 * rng.uniform() - 1.0;
  for (auto& g : p.g) g = 2.0 * rng.uniform() - 1.0;
  p.offset = offset;
  return p;
}

std::vector<int8_t> spins_of(uint32_t mask, int n) {
  std::vector<int8_t> s(n);
  for (int i = 0; i < n; ++i) s[i] = (mask >> (n - 1 - i)) & 1u ? 1 : -1;
  return s;
}

std::vector<uint8_t> bits_of(uint32_t mask, int n) {
  std::vector<uint8_t> b(n);
  for (int i = 0; i < n; ++i) b[i] = (mask >> (n - 1 - i)) & 1u;
  return b;
}

}  // namespace

TEST(IsingEnergy, HandValues) {
  IsingProblem p = IsingProblem::zeros(1);
  p.f[0] = 1.0;
  EXPECT_DOUBLE_EQ(ising_energy(p, std::vector<int8_t>{-1}), -1.0);

  IsingProblem q = IsingProblem::zeros(2);
  q.f = {-2.0, -2.0};
  EXPECT_DOUBLE_EQ(ising_energy(q, std::vector<int8_t>{1, 1}), -4.0);

  IsingProblem z = IsingProblem::zeros(3);
  z.offset = 7.5;
  for (uint32_t m = 0; m < 8; ++m)
    EXPECT_DOUBLE_EQ(ising_energy(z, spins_of(m, 3)), 7.5);
}

TEST(IsingEnergy, LengthChecked) {
  IsingProblem p = IsingProblem::zeros(2);
  EXPECT_THROW(ising_energy(p, std::vector<int8_t>{1}), std::invalid_argument);
}

TEST(Conversion, SingleVariable) {
  // D_1 = 2  ->  f_1 = 1 with a +1 offset shift.
  QuboProblem q = QuboProblem::zeros(1);
  q.diag[0] = 2.0;
  const IsingProblem p = qubo_to_ising(q);
  EXPECT_DOUBLE_EQ(p.f[0], 1.0);
  EXPECT_DOUBLE_EQ(p.offset, 1.0);
}

TEST(Conversion, ZeroProblem) {
  const IsingProblem p = qubo_to_ising(QuboProblem::zeros(4));
  EXPECT_EQ(p.f, std::vector<double>(4, 0.0));
  EXPECT_EQ(p.g, std::vector<double>(6, 0.0));
  EXPECT_DOUBLE_EQ(p.offset, 0.0);
}

TEST(Conversion, EnergiesMatchOnAllAssignments) {
  for (uint64_t seed : {1u, 2u, 3u}) {
    Rng rng(seed);
    QuboProblem q = QuboProblem::zeros(6);
    for (auto& d : q.diag) d = 4.0 * rng.uniform() - 2.0;
    for (auto& u : q.offdiag) u = 4.0 * rng.uniform() - 2.0;
    q.offset = rng.uniform();
    const IsingProblem p = qubo_to_ising(q);
    for (uint32_t m = 0; m < 64; ++m)
      EXPECT_NEAR(qubo_energy(q, bits_of(m, 6)), ising_energy(p, spins_of(m, 6)), 1e-12);
  }
}

TEST(Conversion, RoundTripIdentity) {
  const IsingProblem p = random_ising(7, 11, 0.4);
  const IsingProblem back = qubo_to_ising(ising_to_qubo(p));
  ASSERT_EQ(back.n, p.n);
  for (int i = 0; i < p.n; ++i) EXPECT_NEAR(back.f[i], p.f[i], 1e-12);
  for (size_t k = 0; k < p.g.size(); ++k) EXPECT_NEAR(back.g[k], p.g[k], 1e-12);
  EXPECT_NEAR(back.offset, p.offset, 1e-12);
}

TEST(Conversion, InverseEnergiesMatch) {
  const IsingProblem p = random_ising(5, 23, -1.25);
  const QuboProblem q = ising_to_qubo(p);
  for (uint32_t m = 0; m < 32; ++m)
    EXPECT_NEAR(ising_energy(p, spins_of(m, 5)), qubo_energy(q, bits_of(m, 5)), 1e-12);
}

TEST(Json, IsingRoundTrip) {
  const IsingProblem p = random_ising(5, 31, 2.5);
  const IsingProblem back = ising_from_json(to_json(p));
  EXPECT_EQ(back.n, p.n);
  EXPECT_EQ(back.f, p.f);
  EXPECT_EQ(back.g, p.g);
  EXPECT_EQ(back.offset, p.offset);
}

TEST(Json, SparseCouplingList) {
  IsingProblem p = IsingProblem::zeros(3);
  p.coupling(0, 2) = -1.5;
  const nlohmann::json j = to_json(p);
  ASSERT_EQ(j.at("g").size(), 1u);
  EXPECT_EQ(j.at("g")[0][0], 0);
  EXPECT_EQ(j.at("g")[0][1], 2);
  EXPECT_EQ(j.at("g")[0][2], -1.5);
}

TEST(SpinBitMaps, Involution) {
  const std::vector<uint8_t> bits{0, 1, 1, 0};
  EXPECT_EQ(spins_to_bits(bits_to_spins(bits)), bits);
}
