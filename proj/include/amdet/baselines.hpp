#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "amdet/constellation.hpp"
#include "amdet/types.hpp"

namespace amdet {

/// Exact maximum-likelihood search over all |O|^{N_t} candidate vectors
/// (capped at 2^20). Ties break to the lexicographically smallest bit
/// pattern. Returns Gray-demapped bits.
std::vector<uint8_t> brute_force_ml(const CMat& h, const CVec& y, const Constellation& c);

/// Pseudo-inverse equalization followed by per-sender slicing to the nearest
/// constellation point. Throws decode_error for rank-deficient channels.
std::vector<uint8_t> zero_forcing(const CMat& h, const CVec& y, const Constellation& c);

struct SphereStats {
  long long visited = 0;   // tree nodes whose partial metric was evaluated
  double final_radius = 0; // squared radius after the search
  double metric = 0;       // metric of the returned solution
};

/// Depth-first sphere decoder with best-first child ordering and radius
/// shrinking, starting from an infinite radius. Exact ML: returns the same
/// bits as brute_force_ml. A node counts as visited when its partial metric
/// is evaluated, whether or not it survives the radius test.
std::pair<std::vector<uint8_t>, SphereStats> sphere_decode(const CMat& h, const CVec& y,
                                                           const Constellation& c);

}  // namespace amdet
