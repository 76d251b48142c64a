#include "amdet/embedding.hpp"

#include <set>

#include "amdet/solver.hpp"
#include "gtest/gtest.h"

using namespace amdet;

namespace {

IsingProblem random_ising(int n, uint64_t seed) {
  Rng rng(seed);
  IsingProblem p = IsingProblem::zeros(n);
  for (auto& f : p.f) f = 2.0 * rng.uniform() - 1.0;
  for (auto& g : p.g) g = 2.0 * rng.uniform() - 1.0;
  return p;
}

std::vector<int8_t> logical_spins(uint32_t mask, int n) {
  std::vector<int8_t> s(n);
  for (int i = 0; i < n; ++i) s[i] = (mask >> (n - 1 - i)) & 1u ? 1 : -1;
  return s;
}

// Physical assignment with every chain agreeing on its logical value.
std::vector<int8_t> chain_consistent(const EmbeddedIsing& emb,
                                     const std::vector<int8_t>& logical) {
  std::vector<int8_t> phys(emb.n_nodes());
  for (size_t i = 0; i < emb.chains.size(); ++i)
    for (int d : emb.chains[i]) phys[d] = logical[i];
  return phys;
}

}  // namespace

TEST(QubitCounts, FormulaTable) {
  EXPECT_EQ(physical_qubit_count(10), 40);
  EXPECT_EQ(physical_qubit_count(20), 120);
  EXPECT_EQ(physical_qubit_count(40), 440);
  EXPECT_EQ(physical_qubit_count(60), 960);
  EXPECT_EQ(physical_qubit_count(12), 48);
  EXPECT_EQ(physical_qubit_count(16), 80);
}

TEST(Parallelization, Examples) {
  EXPECT_EQ(parallelization_factor(16, 2031), 25);
  EXPECT_EQ(parallelization_factor(16, 2048), 25);
  EXPECT_EQ(parallelization_factor(60, 2048), 2);
  EXPECT_EQ(parallelization_factor(120, 2048), 0);  // non-embeddable
  EXPECT_THROW(parallelization_factor(0, 2048), std::invalid_argument);
}

TEST(CliqueEmbed, ChainStructure) {
  const ChimeraGraph g = ChimeraGraph::dw2000q();
  for (int n : {1, 5, 10, 12, 16, 33, 64}) {
    const Embedding e = clique_embed(n, g);
    EXPECT_EQ(e.chain_length, (n + 3) / 4 + 1);
    EXPECT_EQ(e.total_nodes(), physical_qubit_count(n));
    std::set<int> used;
    for (const auto& chain : e.chains) {
      ASSERT_EQ(static_cast<int>(chain.size()), e.chain_length);
      for (size_t c = 0; c + 1 < chain.size(); ++c)
        EXPECT_TRUE(g.has_edge(chain[c], chain[c + 1]))
            << "n=" << n << " broken chain link";
      for (int node : chain) EXPECT_TRUE(used.insert(node).second) << "chains overlap";
    }
  }
}

TEST(CliqueEmbed, TwelveNodeLayout) {
  // 12 logicals: 3 diagonal cells plus 3 connector cells, chains of length 4.
  const ChimeraGraph g = ChimeraGraph::dw2000q();
  const Embedding e = clique_embed(12, g);
  EXPECT_EQ(e.chain_length, 4);
  std::set<int> cells;
  for (const auto& chain : e.chains)
    for (int node : chain) cells.insert(node / 8);
  EXPECT_EQ(cells.size(), 6u);
  EXPECT_EQ(e.total_nodes(), 48);
}

TEST(CliqueEmbed, OneCouplerPerPair) {
  const ChimeraGraph g = ChimeraGraph::dw2000q();
  const Embedding e = clique_embed(13, g);
  std::set<std::pair<int, int>> seen;
  for (int i = 0; i < e.n_logical; ++i)
    for (int j = i + 1; j < e.n_logical; ++j) {
      const auto& [u, v] = e.coupler(i, j);
      EXPECT_TRUE(g.has_edge(u, v));
      const auto in_chain = [&](int node, int logical) {
        const auto& c = e.chains[logical];
        return std::find(c.begin(), c.end(), node) != c.end();
      };
      // One endpoint on each chain, either orientation.
      EXPECT_TRUE((in_chain(u, j) && in_chain(v, i)) || (in_chain(u, i) && in_chain(v, j)));
      EXPECT_TRUE(seen.insert({std::min(u, v), std::max(u, v)}).second)
          << "coupler reused across pairs";
    }
}

TEST(CliqueEmbed, CapacityErrors) {
  const ChimeraGraph g = ChimeraGraph::dw2000q();
  try {
    clique_embed(65, g);  // needs a 17-cell triangle
    FAIL() << "expected capacity_error";
  } catch (const capacity_error& e) {
    EXPECT_NE(std::string(e.what()).find("2048"), std::string::npos);
  }
  EXPECT_THROW(clique_embed(5, ChimeraGraph(1, 1)), capacity_error);
  // A defect inside the triangle blocks the embedding.
  const int dead = ChimeraGraph(16, 16).node_id(1, 0, 0, 2);
  EXPECT_THROW(clique_embed(8, ChimeraGraph(16, 16, {dead})), capacity_error);
  // ... but a defect outside it is fine.
  const int far = ChimeraGraph(16, 16).node_id(0, 15, 1, 0);
  EXPECT_EQ(clique_embed(8, ChimeraGraph(16, 16, {far})).total_nodes(), 24);
}

TEST(EmbedIsing, SingleVariableExample) {
  // One logical on a chain of two: f = 2, J_F = 2 -> h = 0.5 each, bond -1.
  const ChimeraGraph g = ChimeraGraph::dw2000q();
  const Embedding e = clique_embed(1, g);
  IsingProblem p = IsingProblem::zeros(1);
  p.f[0] = 2.0;
  const EmbeddedIsing emb = embed_ising(p, e, 2.0, RangeMode::Standard);
  ASSERT_EQ(emb.n_nodes(), 2);
  EXPECT_DOUBLE_EQ(emb.h[0], 0.5);
  EXPECT_DOUBLE_EQ(emb.h[1], 0.5);
  ASSERT_EQ(emb.bonds.size(), 1u);
  EXPECT_DOUBLE_EQ(emb.bonds[0].j, -1.0);
  EXPECT_EQ(emb.clamped_count, 0);
}

TEST(EmbedIsing, ChainBondsAreMinusOne) {
  const Embedding e = clique_embed(9, ChimeraGraph::dw2000q());
  const IsingProblem p = random_ising(9, 3);
  const EmbeddedIsing emb = embed_ising(p, e, 10.0, RangeMode::Standard);
  int chain_bonds = 0;
  for (const auto& b : emb.bonds) chain_bonds += b.j == -1.0 ? 1 : 0;
  EXPECT_GE(chain_bonds, 9 * (e.chain_length - 1));
}

TEST(EmbedIsing, ChainConsistentEnergyIdentity) {
  // For agreeing chains: embedded energy = ising/|J_F| - N*ceil(N/4).
  const ChimeraGraph g = ChimeraGraph::dw2000q();
  for (int n : {2, 5, 8, 11}) {
    const IsingProblem p = random_ising(n, 100 + n);
    const Embedding e = clique_embed(n, g);
    const double jf = 3.0;
    const EmbeddedIsing emb = embed_ising(p, e, jf, RangeMode::Standard);
    ASSERT_EQ(emb.clamped_count, 0);
    const double chain_term = static_cast<double>(n) * ((n + 3) / 4);
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
      const auto logical = logical_spins(mask, n);
      const double expect = ising_energy(p, logical) / jf - chain_term;
      EXPECT_NEAR(emb.energy(chain_consistent(emb, logical)), expect, 1e-9)
          << "n=" << n << " mask=" << mask;
    }
  }
}

TEST(EmbedIsing, NoClampWhenCoefficientsSmall) {
  const Embedding e = clique_embed(6, ChimeraGraph::dw2000q());
  const IsingProblem p = random_ising(6, 8);  // couplings within [-1, 1]
  const EmbeddedIsing emb = embed_ising(p, e, 1.0, RangeMode::Standard);
  EXPECT_EQ(emb.clamped_count, 0);
  EXPECT_DOUBLE_EQ(emb.squeeze, 1.0);
}

TEST(EmbedIsing, ClampingReportedAndRangeModes) {
  const Embedding e = clique_embed(2, ChimeraGraph::dw2000q());
  IsingProblem p = IsingProblem::zeros(2);
  p.coupling(0, 1) = -1.5;  // with J_F = 1: below the standard floor
  const EmbeddedIsing std_mode = embed_ising(p, e, 1.0, RangeMode::Standard);
  EXPECT_EQ(std_mode.clamped_count, 1);
  EXPECT_NEAR(std_mode.squeeze, 1.5, 1e-12);
  double min_j = 0;
  for (const auto& b : std_mode.bonds) min_j = std::min(min_j, b.j);
  EXPECT_DOUBLE_EQ(min_j, -1.0);
  // Improved range admits the same coupler unclamped.
  const EmbeddedIsing imp_mode = embed_ising(p, e, 1.0, RangeMode::Improved);
  EXPECT_EQ(imp_mode.clamped_count, 0);
  min_j = 0;
  for (const auto& b : imp_mode.bonds) min_j = std::min(min_j, b.j);
  EXPECT_DOUBLE_EQ(min_j, -1.5);
  // Positive couplers clamp at +1 in both modes.
  p.coupling(0, 1) = 2.5;
  const EmbeddedIsing pos = embed_ising(p, e, 1.0, RangeMode::Improved);
  EXPECT_EQ(pos.clamped_count, 1);
  EXPECT_NEAR(pos.squeeze, 2.5, 1e-12);
}

TEST(EmbedIsing, RequiresPositivePenalty) {
  const Embedding e = clique_embed(2, ChimeraGraph::dw2000q());
  EXPECT_THROW(embed_ising(IsingProblem::zeros(2), e, 0.0, RangeMode::Standard),
               std::invalid_argument);
}

TEST(GroundState, PreservedUnderSufficientPenalty) {
  // |J_F| >= 1 + sum|g|: embedded ground state is chain consistent and
  // unembeds to the logical ground state.
  const ChimeraGraph g = ChimeraGraph::dw2000q();
  for (int n : {3, 5}) {
    for (uint64_t seed : {1u, 2u}) {
      const IsingProblem p = random_ising(n, 900 + 10 * n + seed);
      const Embedding e = clique_embed(n, g);
      const double jf = 1.0 + p.coupling_abs_sum();
      const EmbeddedIsing emb = embed_ising(p, e, jf, RangeMode::Standard);

      double best = 1e300;
      uint64_t best_mask = 0;
      const int m = emb.n_nodes();
      std::vector<int8_t> phys(m);
      for (uint64_t mask = 0; mask < (uint64_t{1} << m); ++mask) {
        for (int b = 0; b < m; ++b) phys[b] = (mask >> b) & 1 ? 1 : -1;
        const double energy = emb.energy(phys);
        if (energy < best) {
          best = energy;
          best_mask = mask;
        }
      }
      for (int b = 0; b < m; ++b) phys[b] = (best_mask >> b) & 1 ? 1 : -1;
      Rng rng(7);
      EXPECT_EQ(unembed(phys, emb, rng), exact_ground(p)) << "n=" << n << " seed=" << seed;
    }
  }
}

TEST(Unembed, MajorityAndTies) {
  const ChimeraGraph g = ChimeraGraph::dw2000q();
  const Embedding e = clique_embed(5, g);  // chains of length 3
  const IsingProblem p = IsingProblem::zeros(5);
  const EmbeddedIsing emb = embed_ising(p, e, 1.0, RangeMode::Standard);

  std::vector<int8_t> phys(emb.n_nodes(), 1);
  // Chain 0: one dissenter keeps the majority value.
  phys[emb.chains[0][1]] = -1;
  Rng rng(3);
  EXPECT_EQ(unembed(phys, emb, rng)[0], 1);

  // All-consistent sample equals any chain member.
  std::vector<int8_t> down(emb.n_nodes(), -1);
  EXPECT_EQ(unembed(down, emb, rng), std::vector<int8_t>(5, -1));
}

TEST(Unembed, TieIsFairCoin) {
  const ChimeraGraph g = ChimeraGraph::dw2000q();
  const Embedding e = clique_embed(1, g);  // single chain of length 2
  const EmbeddedIsing emb = embed_ising(IsingProblem::zeros(1), e, 1.0, RangeMode::Standard);
  std::vector<int8_t> phys{1, -1};
  Rng rng(99);
  int ups = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) ups += unembed(phys, emb, rng)[0] == 1;
  EXPECT_NEAR(static_cast<double>(ups) / trials, 0.5, 0.02);
}

TEST(Unembed, MissingNodeFails) {
  const ChimeraGraph g = ChimeraGraph::dw2000q();
  const Embedding e = clique_embed(2, g);
  std::map<int, int8_t> sample;
  for (int node : e.chains[0]) sample[node] = 1;
  Rng rng(1);
  EXPECT_THROW(unembed(sample, e, rng), std::invalid_argument);
  for (int node : e.chains[1]) sample[node] = -1;
  EXPECT_EQ(unembed(sample, e, rng), (std::vector<int8_t>{1, -1}));
}

TEST(EmbeddedJson, DumpShape) {
  const Embedding e = clique_embed(2, ChimeraGraph::dw2000q());
  IsingProblem p = IsingProblem::zeros(2);
  p.f = {1.0, -1.0};
  p.coupling(0, 1) = 0.5;
  const nlohmann::json j = to_json(embed_ising(p, e, 2.0, RangeMode::Improved));
  EXPECT_EQ(j.at("nodes").size(), 4u);
  EXPECT_EQ(j.at("h").size(), 4u);
  EXPECT_EQ(j.at("J").size(), 3u);  // two chain bonds + one problem coupler
  EXPECT_EQ(j.at("chains").size(), 2u);
}
