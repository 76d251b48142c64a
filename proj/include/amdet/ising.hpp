#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "amdet/types.hpp"

namespace amdet {

/// Packed strictly-upper-triangular index for an n-variable problem, i < j.
inline size_t tri_index(int n, int i, int j) {
  return static_cast<size_t>(i) * n - static_cast<size_t>(i) * (i + 1) / 2 + (j - i - 1);
}

/// Spin objective  sum_{i<j} g_ij s_i s_j + sum_i f_i s_i + offset,
/// s_i in {+1,-1}. `offset` makes the energy of reduced detection problems
/// equal their Euclidean distances.
struct IsingProblem {
  int n = 0;
  std::vector<double> f;  // linear terms, size n
  std::vector<double> g;  // couplings, packed upper-triangular
  double offset = 0.0;

  static IsingProblem zeros(int n);
  double& coupling(int i, int j) { return g[tri_index(n, i, j)]; }
  double coupling(int i, int j) const { return g[tri_index(n, i, j)]; }
  /// Sum of |g_ij| over all pairs (used for sufficient chain penalties).
  double coupling_abs_sum() const;
};

/// Binary objective  sum_i D_i q_i + sum_{i<j} U_ij q_i q_j + offset,
/// q_i in {0,1}.
struct QuboProblem {
  int n = 0;
  std::vector<double> diag;     // D_i
  std::vector<double> offdiag;  // U_ij, packed upper-triangular
  double offset = 0.0;

  static QuboProblem zeros(int n);
  double& coupling(int i, int j) { return offdiag[tri_index(n, i, j)]; }
  double coupling(int i, int j) const { return offdiag[tri_index(n, i, j)]; }
};

double ising_energy(const IsingProblem& p, std::span<const int8_t> spins);
double qubo_energy(const QuboProblem& p, std::span<const uint8_t> bits);

/// Exact equivalence under q_i = (s_i+1)/2; constants are absorbed into the
/// offsets so energies match assignment-for-assignment.
IsingProblem qubo_to_ising(const QuboProblem& p);
QuboProblem ising_to_qubo(const IsingProblem& p);

std::vector<int8_t> bits_to_spins(std::span<const uint8_t> bits);
std::vector<uint8_t> spins_to_bits(std::span<const int8_t> spins);

/// Interchange dumps: {n, f[], g[[i,j,val]...], offset} for Ising;
/// {n, diag[], offdiag[[i,j,val]...], offset} for QUBO. Zero couplings are
/// omitted from the sparse lists.
nlohmann::json to_json(const IsingProblem& p);
nlohmann::json to_json(const QuboProblem& p);
IsingProblem ising_from_json(const nlohmann::json& j);

}  // namespace amdet
