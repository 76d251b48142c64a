#include "amdet/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace amdet {

long long physical_qubit_count(long long n_logical) {
  const long long chain = (n_logical + 3) / 4 + 1;
  return n_logical * chain;
}

long long parallelization_factor(int n_logical, long long chip_nodes) {
  if (n_logical < 1) throw std::invalid_argument("parallelization_factor: n >= 1 required");
  return chip_nodes / physical_qubit_count(n_logical);
}

Embedding clique_embed(int n, const ChimeraGraph& g) {
  if (n < 1) throw std::invalid_argument("clique_embed: n >= 1 required");
  const int blocks = (n + 3) / 4;
  const long long required = physical_qubit_count(n);
  if (blocks > g.rows() || blocks > g.cols() || required > g.num_nodes())
    throw capacity_error("clique_embed: " + std::to_string(n) + " logical variables need " +
                         std::to_string(required) + " qubits in a " + std::to_string(blocks) +
                         "-cell triangle; chip provides " + std::to_string(g.num_nodes()) +
                         " nodes on a " + std::to_string(g.rows()) + "x" +
                         std::to_string(g.cols()) + " grid");

  // The triangle region (rows 0..blocks-1, cols 0..row) must be defect-free.
  for (int r = 0; r < blocks; ++r)
    for (int c = 0; c <= r; ++c)
      for (int side = 0; side < 2; ++side)
        for (int k = 0; k < ChimeraGraph::kShore; ++k)
          if (!g.has_node(g.node_id(r, c, side, k)))
            throw capacity_error("clique_embed: defect inside the embedding region at cell (" +
                                 std::to_string(r) + "," + std::to_string(c) + ")");

  Embedding e;
  e.n_logical = n;
  e.chain_length = blocks + 1;
  e.chains.resize(n);
  for (int i = 0; i < n; ++i) {
    const int b = i / 4;
    const int k = i % 4;
    auto& chain = e.chains[i];
    chain.reserve(e.chain_length);
    // Horizontal arm along row b, then vertical arm down column b; the two
    // arms join through the intra-cell (k,k) coupler at the diagonal.
    for (int c = 0; c <= b; ++c) chain.push_back(g.node_id(b, c, 1, k));
    for (int r = b; r < blocks; ++r) chain.push_back(g.node_id(r, b, 0, k));
  }

  e.couplers.resize(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    const int bi = i / 4, ki = i % 4;
    for (int j = i + 1; j < n; ++j) {
      const int bj = j / 4, kj = j % 4;
      // In cell (bj, bi): chain j passes on the horizontal shore, chain i on
      // the vertical shore (bi == bj lands on the diagonal cell).
      e.couplers[tri_index(n, i, j)] = {g.node_id(bj, bi, 1, kj), g.node_id(bj, bi, 0, ki)};
    }
  }
  return e;
}

int EmbeddedIsing::dense_index(int node) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
  if (it == nodes.end() || *it != node)
    throw std::invalid_argument("embedded ising: unknown physical node");
  return static_cast<int>(it - nodes.begin());
}

double EmbeddedIsing::energy(std::span<const int8_t> spins) const {
  if (spins.size() != nodes.size())
    throw std::invalid_argument("embedded energy: spin count != node count");
  double e = 0.0;
  for (size_t i = 0; i < h.size(); ++i) e += h[i] * spins[i];
  for (const Bond& b : bonds) e += b.j * spins[b.u] * spins[b.v];
  return e;
}

EmbeddedIsing embed_ising(const IsingProblem& p, const Embedding& e, double j_f,
                          RangeMode mode) {
  if (p.n != e.n_logical)
    throw std::invalid_argument("embed_ising: problem size != embedding size");
  if (!(std::abs(j_f) > 0)) throw std::invalid_argument("embed_ising: |J_F| must be positive");
  const double jf = std::abs(j_f);

  EmbeddedIsing out;
  out.j_f = jf;
  out.mode = mode;

  for (const auto& chain : e.chains)
    out.nodes.insert(out.nodes.end(), chain.begin(), chain.end());
  std::sort(out.nodes.begin(), out.nodes.end());
  out.nodes.erase(std::unique(out.nodes.begin(), out.nodes.end()), out.nodes.end());
  if (static_cast<int>(out.nodes.size()) != e.total_nodes())
    throw std::invalid_argument("embed_ising: chains overlap");

  out.h.assign(out.nodes.size(), 0.0);
  out.chains.resize(e.n_logical);
  for (int i = 0; i < e.n_logical; ++i) {
    const double per_node = p.f[i] / (jf * e.chain_length);
    for (int node : e.chains[i]) {
      const int d = out.dense_index(node);
      out.h[d] += per_node;
      out.chains[i].push_back(d);
    }
  }

  for (int i = 0; i < e.n_logical; ++i)
    for (size_t c = 0; c + 1 < e.chains[i].size(); ++c)
      out.bonds.push_back({out.dense_index(e.chains[i][c]),
                           out.dense_index(e.chains[i][c + 1]), -1.0});

  for (int i = 0; i < e.n_logical; ++i)
    for (int j = i + 1; j < e.n_logical; ++j) {
      const double g = p.coupling(i, j);
      if (g == 0.0) continue;
      const auto& [u, v] = e.coupler(i, j);
      out.bonds.push_back({out.dense_index(u), out.dense_index(v), g / jf});
    }

  const double j_neg_limit = (mode == RangeMode::Improved) ? -2.0 : -1.0;
  auto clamp = [&](double v, double lo, double hi) {
    if (v < lo || v > hi) {
      ++out.clamped_count;
      out.squeeze = std::max(out.squeeze, std::abs(v) / (v < lo ? -lo : hi));
      return std::clamp(v, lo, hi);
    }
    return v;
  };
  for (auto& hv : out.h) hv = clamp(hv, -2.0, 2.0);
  for (auto& b : out.bonds) b.j = clamp(b.j, j_neg_limit, 1.0);
  return out;
}

namespace {

int8_t vote(std::span<const int8_t> spins, Rng& rng) {
  int sum = 0;
  for (int8_t s : spins) sum += s;
  if (sum > 0) return 1;
  if (sum < 0) return -1;
  return rng.coin() ? 1 : -1;
}

}  // namespace

std::vector<int8_t> unembed(std::span<const int8_t> physical_spins,
                            const EmbeddedIsing& emb, Rng& rng) {
  if (physical_spins.size() != emb.nodes.size())
    throw std::invalid_argument("unembed: sample does not cover all chain nodes");
  std::vector<int8_t> logical(emb.chains.size());
  std::vector<int8_t> chain_spins;
  for (size_t i = 0; i < emb.chains.size(); ++i) {
    chain_spins.clear();
    for (int d : emb.chains[i]) chain_spins.push_back(physical_spins[d]);
    logical[i] = vote(chain_spins, rng);
  }
  return logical;
}

std::vector<int8_t> unembed(const std::map<int, int8_t>& sample, const Embedding& e,
                            Rng& rng) {
  std::vector<int8_t> logical(e.n_logical);
  std::vector<int8_t> chain_spins;
  for (int i = 0; i < e.n_logical; ++i) {
    chain_spins.clear();
    for (int node : e.chains[i]) {
      auto it = sample.find(node);
      if (it == sample.end())
        throw std::invalid_argument("unembed: sample is missing physical node " +
                                    std::to_string(node));
      chain_spins.push_back(it->second);
    }
    logical[i] = vote(chain_spins, rng);
  }
  return logical;
}

nlohmann::json to_json(const EmbeddedIsing& emb) {
  nlohmann::json h = nlohmann::json::object();
  for (size_t d = 0; d < emb.h.size(); ++d)
    h[std::to_string(emb.nodes[d])] = emb.h[d];
  nlohmann::json bonds = nlohmann::json::array();
  for (const auto& b : emb.bonds)
    bonds.push_back({emb.nodes[b.u], emb.nodes[b.v], b.j});
  nlohmann::json chains = nlohmann::json::object();
  for (size_t i = 0; i < emb.chains.size(); ++i) {
    nlohmann::json nodes = nlohmann::json::array();
    for (int d : emb.chains[i]) nodes.push_back(emb.nodes[d]);
    chains[std::to_string(i)] = nodes;
  }
  return {{"nodes", emb.nodes},
          {"h", h},
          {"J", bonds},
          {"chains", chains},
          {"j_f", emb.j_f},
          {"range_mode", emb.mode == RangeMode::Improved ? "improved" : "standard"},
          {"clamped", emb.clamped_count},
          {"squeeze", emb.squeeze}};
}

}  // namespace amdet
