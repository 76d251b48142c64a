#pragma once

#include "amdet/constellation.hpp"
#include "amdet/ising.hpp"
#include "amdet/types.hpp"

namespace amdet {

/// Compiles the detection objective ||y - H T(q)||^2 into QUBO form by
/// expanding the norm directly.
///
/// T is the per-sender linear solver transform (see solver_symbol), so the
/// candidate vector is e = a + Bq for a constant complex vector a and matrix
/// B; with r = y - Ha and M = HB the expansion collects, using q_i^2 = q_i,
///   D_k  = ||M_k||^2 - 2 Re(r^H M_k),
///   U_kl = 2 Re(M_k^H M_l),
///   offset = ||r||^2.
/// This route never touches the per-modulation closed-form parameter tables;
/// it is the independent oracle they are tested against.
QuboProblem ml_to_qubo_oracle(const CMat& h, const CVec& y, const Constellation& c);

/// Compiles the same objective into Ising form using the closed-form
/// parameter tables (per-case expressions in the channel columns), one case
/// set per modulation. The offset is included so that the Ising energy of
/// any assignment equals the Euclidean distance ||y - H T(q(s))||^2.
IsingProblem ml_to_ising(const CMat& h, const CVec& y, const Constellation& c);

}  // namespace amdet
