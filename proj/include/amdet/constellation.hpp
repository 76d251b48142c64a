#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amdet/types.hpp"

namespace amdet {

enum class Modulation { Bpsk, Qpsk, Qam16 };

Modulation modulation_from_string(std::string_view name);
std::string_view to_string(Modulation m);

/// A modulation alphabet with its Gray bit labeling.
///
/// Symbols live on the conventional integer lattices: BPSK {-1,+1},
/// QPSK {±1±1j}, 16-QAM {±1,±3}², giving average symbol energies 1, 2
/// and 10. The Gray labeling is a per-axis reflected code (00,01,11,10
/// from the most negative amplitude upward), so nearest-neighbour symbols
/// differ in exactly one bit.
class Constellation {
 public:
  static const Constellation& get(Modulation m);

  Modulation kind() const { return kind_; }
  /// Bits per symbol (Q): 1, 2 or 4.
  int bits_per_symbol() const { return q_; }
  /// Average symbol energy of the alphabet.
  double avg_energy() const { return avg_energy_; }
  std::span<const cxd> symbols() const { return symbols_; }

  /// Gray map: bit tuple of length Q -> symbol.
  cxd map_bits(std::span<const uint8_t> bits) const;
  /// Inverse Gray map; `symbol` must be an exact constellation point.
  std::vector<uint8_t> demap_symbol(cxd symbol) const;
  /// Nearest constellation point in Euclidean distance (ties to the
  /// first point in symbol order).
  cxd slice(cxd x) const;

 private:
  Constellation(Modulation kind, int q, double avg_energy);

  Modulation kind_;
  int q_;
  double avg_energy_;
  std::vector<cxd> symbols_;           // indexed by Gray bit tuple value
};

}  // namespace amdet
