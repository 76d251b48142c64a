#pragma once

#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "amdet/channel.hpp"
#include "amdet/constellation.hpp"
#include "amdet/embedding.hpp"
#include "amdet/solver.hpp"

namespace amdet {

/// Everything a sweep needs. Grids cross-multiply; single-point grids give
/// plain runs.
struct ExperimentConfig {
  Modulation modulation = Modulation::Qpsk;
  int n_t = 4;  // n_r == n_t
  ChannelKind channel = ChannelKind::RayleighIid;
  std::string trace_path;
  std::vector<double> snr_db;  // empty: 20 dB, or noiseless for traces
  int instances = 10;
  uint64_t seed = 1;

  std::vector<double> jf_grid = {8.0};
  std::vector<double> ta_grid = {10.0};
  std::vector<double> tp_grid = {1.0};
  std::vector<double> sp_grid = {0.35};

  RangeMode range_mode = RangeMode::Improved;
  Backend backend = Backend::Sa;
  int anneals = 50;
  double sweeps_per_us = 10.0;
  IceModel ice;

  double target_ber = 1e-6;
  double target_fer = 1e-4;
  long long frame_bits = 12000;  // 1500 bytes

  bool use_parallelization = true;
  long long chip_nodes = 2048;
  int threads = 1;

  std::vector<double>& snr_list();
  void validate() const;  // throws config_error
};

/// Reads a config file. `.json` parses as JSON; anything else as the TOML
/// subset: [tables], key = value with strings, numbers, booleans and flat
/// arrays, '#' comments.
nlohmann::json load_config_file(const std::string& path);
nlohmann::json parse_toml_subset(std::istream& in, const std::string& name);

/// Applies config keys onto defaults; unknown keys are config errors.
void apply_config(const nlohmann::json& j, ExperimentConfig& cfg);

/// Full round-trip of the effective configuration (for records/reproduction).
nlohmann::json config_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

}  // namespace amdet
