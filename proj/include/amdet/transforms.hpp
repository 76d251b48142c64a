#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "amdet/constellation.hpp"
#include "amdet/types.hpp"

namespace amdet {

/// Receiver-side linear map from one sender's solver bits to a candidate
/// symbol. This is the transform the quadratic reduction assumes:
///   BPSK    2q1 - 1
///   QPSK    (2q1 - 1) + j(2q2 - 1)
///   16-QAM  (4q1 + 2q2 - 3) + j(4q3 + 2q4 - 3)
/// Linearity in the bits is what keeps the expanded norm quadratic.
cxd solver_symbol(std::span<const uint8_t> tuple, const Constellation& c);

/// Rewrites one sender's solver bits (labeling of `solver_symbol`) into the
/// transmitted Gray-coded bits, in place.
///
/// BPSK and QPSK are identities (their solver labeling already is the Gray
/// labeling). For 16-QAM two steps apply:
///   1. if bit 2 is set, flip bits 3 and 4 (mirrors the even constellation
///      columns, producing the intermediate code);
///   2. differential encoding across the tuple: b1, b1^b2, b2^b3, b3^b4.
void post_translate(std::span<uint8_t> tuple, const Constellation& c);

/// One-step intermediate code of the 16-QAM translation (step 1 only).
/// Exposed for table-level verification.
void flip_even_columns(std::span<uint8_t> tuple, const Constellation& c);

/// Per-sender post-translation over a whole solution vector of N_t*Q bits.
std::vector<uint8_t> decode_bits(std::span<const uint8_t> solver_bits,
                                 const Constellation& c);

}  // namespace amdet
