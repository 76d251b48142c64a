#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "amdet/constellation.hpp"
#include "amdet/solver.hpp"
#include "amdet/types.hpp"

namespace amdet {

/// Distinct run solutions ranked by energy (rank 1 = lowest found), with
/// occurrence probabilities and decoded bit-error counts against the known
/// transmitted bits. Equal-energy distinct solutions occupy consecutive
/// ranks, ordered by their solver bit pattern.
struct RankedSolutions {
  int n_bits = 0;                          // bits per solution (N)
  std::vector<double> p;                   // occurrence probability per rank
  std::vector<int> bit_errors;             // F(k), against ground truth
  std::vector<double> energy;              // ascending
  std::vector<double> delta_e;             // (E_r - E_1)/|E_1| (plain gap if E_1 == 0)
  std::vector<std::vector<uint8_t>> bits;  // decoded Gray bits per rank

  int n_ranks() const { return static_cast<int>(p.size()); }
};

RankedSolutions rank_solutions(const SampleSet& s, std::span<const uint8_t> truth_bits,
                               const Constellation& c);

/// Expected time to find the best solution with probability `target`, given
/// per-anneal success probability p0 and per-anneal time t_us:
/// t_us * log(1-target)/log(1-p0). Returns t_us when p0 >= target (one
/// anneal suffices) and +inf when p0 == 0.
double tts(double p0, double t_us, double target = 0.99);

/// Expected bit error rate of the best-of-n_a solution:
/// sum_k [ (sum_{r>=k} p_r)^n_a - (sum_{r>=k+1} p_r)^n_a ] * F(k)/N.
double expected_ber(const RankedSolutions& r, long long n_a);

struct TtbResult {
  bool reachable = false;
  long long n_a = 0;        // smallest anneal count meeting the target
  double time_us = 0.0;     // n_a * (t_a + t_p) / p_f; +inf when unreachable
  double asymptote = 0.0;   // limit of expected_ber as n_a -> inf
};

/// Time to reach `target_ber`, amortized over p_f parallel problem copies.
/// Unreachable targets yield reachable=false with the asymptotic BER.
TtbResult ttb(const RankedSolutions& r, double target_ber, double t_a_us, double t_p_us,
              long long p_f);

/// Frame error rate 1 - (1 - ber)^frame_bits.
double fer(double ber, long long frame_bits);

}  // namespace amdet
