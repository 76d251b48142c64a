#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "amdet/config.hpp"
#include "amdet/metrics.hpp"

namespace amdet {

struct GridPoint {
  double jf = 8.0;
  double ta = 10.0;
  double tp = 1.0;
  double sp = 0.35;
};

/// One instance through the full pipeline, plus everything needed to re-run
/// it bit-exactly.
struct InstanceRecord {
  int instance_id = 0;
  uint64_t instance_seed = 0;  // channel use (H, bits, noise)
  uint64_t solver_seed = 0;    // anneal run
  double snr_db = 0.0;
  GridPoint params;

  int n_logical = 0;
  long long physical_qubits = 0;
  long long p_f = 1;
  bool embeddable = true;
  std::string error;       // non-empty: pipeline failed (record still emitted)
  std::string error_kind;  // "capacity" | "config" | "runtime"
  int clamped = 0;
  double squeeze = 1.0;

  double p_ground = 0.0;  // occurrence probability of the rank-1 solution
  double tts_us = 0.0;
  std::vector<std::pair<long long, double>> ber_curve;
  TtbResult ttb;
  TtbResult ttf;
  double ber_at_na = 0.0;
  double fer_at_na = 0.0;
  int rank1_bit_errors = 0;
  bool decoded_ok = false;
};

/// Pipeline: channel use -> Ising reduction -> clique embedding -> anneal
/// run -> majority-vote unembedding -> ranking -> metrics. The exact backend
/// solves the logical problem (no embedding pass); embedding statistics are
/// reported either way.
InstanceRecord run_instance(const ExperimentConfig& cfg, const GridPoint& gp, double snr_db,
                            int instance_id, uint64_t instance_seed, uint64_t solver_seed);

/// Self-describing JSON record: metric outcomes plus the full parameter set.
nlohmann::json record_json(const InstanceRecord& rec, const ExperimentConfig& cfg);

/// Re-runs the pipeline from a record's embedded parameters. Output is
/// byte-identical to the original record.
nlohmann::json rerun_record(const nlohmann::json& record);

/// Cross-product sweep over snr x (jf, ta, tp, sp) x instances. Emits one
/// record per run (deterministic order: snr, grid, instance), then per-SNR
/// summary rows for the fixed-parameter strategy (grid point minimizing the
/// median TTB across instances) and the per-instance-optimal strategy.
void sweep(const ExperimentConfig& cfg, const std::function<void(const nlohmann::json&)>& emit);

/// Deterministic per-instance / per-grid-point seeds (exposed for tests).
uint64_t instance_seed_for(uint64_t base_seed, int instance_id);
uint64_t solver_seed_for(uint64_t base_seed, int instance_id, size_t grid_index,
                         size_t snr_index);

/// Flattened CSV emission for plotting; one row per record.
std::string csv_header();
std::string csv_row(const nlohmann::json& record);

}  // namespace amdet
