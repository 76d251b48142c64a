#pragma once

#include <cstdint>
#include <random>

namespace amdet {

/// Deterministic RNG with cheap stream splitting.
///
/// `fork(stream)` derives an independent generator from the *construction*
/// seed, not from the current engine state, so forked streams do not depend
/// on how much the parent has been consumed. This is what keeps sweeps
/// reproducible regardless of evaluation order or parallelism.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  Rng fork(uint64_t stream) const;

  uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  /// Standard normal.
  double gaussian();
  double gaussian(double mean, double stddev);
  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi);
  /// Fair coin.
  bool coin();

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace amdet
