#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "amdet/embedding.hpp"
#include "amdet/ising.hpp"
#include "amdet/rng.hpp"
#include "amdet/types.hpp"

namespace amdet {

/// Anneal-run timing parameters. The stand-in sampler maps wall-clock
/// microseconds to Metropolis sweeps at `sweeps_per_us`; a pause inserts
/// extra sweeps at the fixed temperature reached `s_p` of the way down the
/// ladder. Pause positions outside [0.15, 0.55] are rejected when a pause
/// is requested.
struct AnnealSchedule {
  double t_a_us = 1.0;
  double t_p_us = 1.0;
  double s_p = 0.35;
  int n_a = 50;
  double sweeps_per_us = 10.0;
};

/// Per-anneal Gaussian perturbation of programmed coefficients. Defaults are
/// the measured control-error magnitudes of the modeled hardware.
struct IceModel {
  bool enabled = true;
  double f_mean = 0.008;
  double f_std = 0.02;
  double g_mean = -0.015;
  double g_std = 0.025;

  static IceModel off() {
    IceModel m;
    m.enabled = false;
    return m;
  }
};

enum class Backend { Exact, Sa };
Backend backend_from_string(std::string_view name);
std::string_view to_string(Backend b);

struct SampleRecord {
  std::vector<int8_t> spins;  // logical assignment
  double energy;              // scored on the unperturbed problem
  int count;
};

/// Distinct solutions of one run in first-seen order; counts sum to the
/// anneal count.
struct SampleSet {
  std::vector<SampleRecord> records;
  int n_anneals = 0;
  Backend backend = Backend::Sa;
  AnnealSchedule schedule;
  uint64_t seed = 0;
};

struct ExactSpectrum {
  std::vector<double> energies;   // all 2^n energies, ascending
  std::vector<uint32_t> states;   // bit (n-1-i) set <=> s_i = +1
  std::vector<int8_t> ground;     // lexicographically-first minimizer
  double ground_energy = 0.0;
  int ground_count = 0;           // states at the minimum energy
};

/// Exhaustive enumeration, n <= 24. Ties at the minimum go to the
/// lexicographically smallest bit vector.
ExactSpectrum solve_exact(const IsingProblem& p);
/// Ground state only, streaming (no spectrum storage).
std::vector<int8_t> exact_ground(const IsingProblem& p);

/// 2^24-style state cap shared by exact paths.
inline constexpr int kExactMaxVars = 24;

IsingProblem apply_ice(const IsingProblem& p, const IceModel& m, Rng& rng);
EmbeddedIsing apply_ice(const EmbeddedIsing& p, const IceModel& m, Rng& rng);

/// Runs n_a independent anneals. Each anneal perturbs the programmed
/// coefficients with ICE, samples with the chosen backend (on the embedded
/// problem when `emb` is given, with majority-vote unembedding), and scores
/// the resulting logical assignment on the unperturbed problem. Anneal k
/// uses the sub-stream rng.fork(k), so results do not depend on evaluation
/// order. The exact backend operates on the logical problem only.
SampleSet anneal_run(const IsingProblem& p, const EmbeddedIsing* emb, Backend backend,
                     const AnnealSchedule& sched, const IceModel& ice, Rng& rng);

/// Minimum-energy record; ties broken by first occurrence.
const SampleRecord& best_of_run(const SampleSet& s);

/// One JSON-lines record per distinct solution: {bits, energy, count}.
nlohmann::json to_json(const SampleRecord& r);

}  // namespace amdet
