#include "amdet/config.hpp"

#include <sstream>

#include "gtest/gtest.h"

using namespace amdet;

TEST(TomlSubset, ScalarsArraysTables) {
  std::istringstream in(
      "# experiment\n"
      "modulation = \"qpsk\"\n"
      "users = 6\n"
      "snr_db = [10, 20.5, inf]\n"
      "parallelization = false\n"
      "\n"
      "[ice]\n"
      "enabled = true  # measured noise\n"
      "f_mean = 0.008\n");
  const nlohmann::json j = parse_toml_subset(in, "mem");
  EXPECT_EQ(j.at("modulation"), "qpsk");
  EXPECT_EQ(j.at("users"), 6);
  EXPECT_EQ(j.at("snr_db").size(), 3u);
  EXPECT_TRUE(std::isinf(j.at("snr_db")[2].get<double>()));
  EXPECT_EQ(j.at("parallelization"), false);
  EXPECT_EQ(j.at("ice").at("enabled"), true);
  EXPECT_EQ(j.at("ice").at("f_mean"), 0.008);
}

TEST(TomlSubset, Errors) {
  std::istringstream bad_kv("modulation qpsk\n");
  EXPECT_THROW(parse_toml_subset(bad_kv, "mem"), parse_error);
  std::istringstream bad_table("[ice\n");
  EXPECT_THROW(parse_toml_subset(bad_table, "mem"), parse_error);
  std::istringstream bad_value("users = banana\n");
  EXPECT_THROW(parse_toml_subset(bad_value, "mem"), parse_error);
}

TEST(Config, ApplyAndValidate) {
  ExperimentConfig cfg;
  apply_config(nlohmann::json{{"modulation", "bpsk"},
                              {"users", 8},
                              {"backend", "exact"},
                              {"jf", {1.0, 2.0}},
                              {"frame_bytes", 50},
                              {"ice", false}},
               cfg);
  EXPECT_EQ(cfg.modulation, Modulation::Bpsk);
  EXPECT_EQ(cfg.n_t, 8);
  EXPECT_EQ(cfg.backend, Backend::Exact);
  EXPECT_EQ(cfg.jf_grid, (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(cfg.frame_bits, 400);
  EXPECT_FALSE(cfg.ice.enabled);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, UnknownKeyRejected) {
  ExperimentConfig cfg;
  EXPECT_THROW(apply_config(nlohmann::json{{"modulatoin", "bpsk"}}, cfg), config_error);
}

TEST(Config, ValidationCatchesBadValues) {
  ExperimentConfig cfg;
  cfg.n_t = 0;
  EXPECT_THROW(cfg.validate(), config_error);
  cfg = ExperimentConfig{};
  cfg.jf_grid = {};
  EXPECT_THROW(cfg.validate(), config_error);
  cfg = ExperimentConfig{};
  cfg.channel = ChannelKind::Trace;
  EXPECT_THROW(cfg.validate(), config_error);  // trace path missing
}

TEST(Config, SnrDefaultsDependOnChannel) {
  ExperimentConfig cfg;
  EXPECT_EQ(cfg.snr_list(), (std::vector<double>{20.0}));
  ExperimentConfig trace_cfg;
  trace_cfg.channel = ChannelKind::Trace;
  trace_cfg.trace_path = "x.csv";
  const auto snrs = trace_cfg.snr_list();
  ASSERT_EQ(snrs.size(), 1u);
  EXPECT_TRUE(std::isinf(snrs[0]));
}

TEST(Config, JsonRoundTrip) {
  ExperimentConfig cfg;
  cfg.modulation = Modulation::Qam16;
  cfg.n_t = 3;
  cfg.snr_db = {15.0, kNoiseless};
  cfg.jf_grid = {1.5};
  cfg.ice.g_std = 0.1;
  cfg.frame_bits = 400;
  const ExperimentConfig back = config_from_json(config_json(cfg));
  EXPECT_EQ(back.modulation, cfg.modulation);
  EXPECT_EQ(back.n_t, cfg.n_t);
  EXPECT_EQ(back.snr_db, cfg.snr_db);
  EXPECT_EQ(back.jf_grid, cfg.jf_grid);
  EXPECT_EQ(back.ice.g_std, cfg.ice.g_std);
  EXPECT_EQ(back.frame_bits, cfg.frame_bits);
}
