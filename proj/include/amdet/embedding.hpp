#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "amdet/chimera.hpp"
#include "amdet/ising.hpp"
#include "amdet/rng.hpp"
#include "amdet/types.hpp"

namespace amdet {

/// Clique embedding of N logical variables: each variable owns a connected
/// chain of ceil(N/4)+1 physical qubits, and every logical pair is joined by
/// exactly one designated physical coupler.
struct Embedding {
  int n_logical = 0;
  int chain_length = 0;
  std::vector<std::vector<int>> chains;           // ordered node path per logical
  std::vector<std::pair<int, int>> couplers;      // active edge per pair, packed i<j

  int total_nodes() const { return n_logical * chain_length; }
  const std::pair<int, int>& coupler(int i, int j) const {
    return couplers[tri_index(n_logical, i, j)];
  }
};

/// Triangular clique embedding. Blocks of four logical variables live on the
/// diagonal cells; the lower-triangle cells interconnect the blocks. Chain i
/// runs horizontally along its block row up to the diagonal, then vertically
/// down its block column. Throws capacity_error when the chip cannot host
/// the construction (node count or grid extent), reporting required vs
/// available nodes.
Embedding clique_embed(int n, const ChimeraGraph& g);

/// N(ceil(N/4)+1): physical qubits consumed by the embedding of N logicals.
long long physical_qubit_count(long long n_logical);

/// Problem copies that fit the chip at once: floor(chip_nodes / physical
/// count); 0 signals a non-embeddable size.
long long parallelization_factor(int n_logical, long long chip_nodes);

enum class RangeMode { Standard, Improved };

/// Physical-coefficient form of an embedded problem, in hardware-normalized
/// units: chain bonds at -1, problem couplings g_ij/|J_F|, linear terms
/// f_i/(|J_F| * chain length) on every chain member.
struct EmbeddedIsing {
  std::vector<int> nodes;    // physical node ids, ascending
  std::vector<double> h;     // by dense node index
  struct Bond {
    int u, v;                // dense node indices
    double j;
  };
  std::vector<Bond> bonds;   // chain bonds first, then problem couplers
  std::vector<std::vector<int>> chains;  // dense node indices per logical
  double j_f = 1.0;
  RangeMode mode = RangeMode::Standard;

  // Range accounting: coefficients outside the mode's window are clamped,
  // never silently; `squeeze` records the worst overflow factor.
  int clamped_count = 0;
  double squeeze = 1.0;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int dense_index(int node) const;
  double energy(std::span<const int8_t> spins) const;
};

/// Hardware coefficient windows: couplers in [-1,+1] (standard) or [-2,+1]
/// (improved negative range); linear terms in [-2,+2].
EmbeddedIsing embed_ising(const IsingProblem& p, const Embedding& e, double j_f,
                          RangeMode mode);

/// Majority vote per chain; exact ties resolved by a fair coin from `rng`.
std::vector<int8_t> unembed(std::span<const int8_t> physical_spins,
                            const EmbeddedIsing& emb, Rng& rng);

/// Same, keyed by physical node id. Throws if any chain node is missing
/// from the sample.
std::vector<int8_t> unembed(const std::map<int, int8_t>& sample, const Embedding& e,
                            Rng& rng);

/// Dump format: {nodes, h{node:val}, J[[u,v,val]...], chains{logical:[nodes]}}.
nlohmann::json to_json(const EmbeddedIsing& emb);

}  // namespace amdet
