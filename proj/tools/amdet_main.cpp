// amdet: compiles maximum-likelihood MIMO detection into Ising/QUBO form,
// embeds it on a Chimera chip model, samples with annealing-style backends
// and reports decoding-quality metrics against classical baselines.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "amdet/baselines.hpp"
#include "amdet/config.hpp"
#include "amdet/harness.hpp"
#include "amdet/reduction.hpp"

using nlohmann::json;

namespace {

using namespace amdet;

// Flag values stash; only keys the user actually passed are applied on top
// of config-file values.
struct CliArgs {
  std::string config_path;
  std::string out_path;
  std::string csv_path;

  std::string modulation, channel, backend, trace, range;
  int users = 0, instances = 0, anneals = 0, threads = 0;
  uint64_t seed = 0;
  std::string snr_db, jf_grid, ta, tp, sp;
  double target_ber = 0, target_fer = 0, sweeps_per_us = 0;
  long long frame_bytes = 0, chip_nodes = 0;
  std::string ice;
  bool improved_range = false, standard_range = false, no_parallelization = false;
};

std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "inf") {
      out.push_back(kNoiseless);
      continue;
    }
    try {
      size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw config_error(flag + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw config_error(flag + ": empty list");
  return out;
}

// "a:b:step" expands to an inclusive grid; plain comma lists pass through.
std::vector<double> parse_grid(const std::string& text, const std::string& flag) {
  if (text.find(':') == std::string::npos) return parse_double_list(text, flag);
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw config_error(flag + ": expected a:b:step");
  const double a = std::stod(parts[0]);
  const double b = std::stod(parts[1]);
  const double step = std::stod(parts[2]);
  if (!(step > 0) || b < a) throw config_error(flag + ": bad grid bounds");
  std::vector<double> out;
  for (double v = a; v <= b + 1e-9; v += step) out.push_back(v);
  return out;
}

void add_common_options(CLI::App* cmd, CliArgs& args) {
  cmd->add_option("--config", args.config_path, "config file (TOML subset or JSON)");
  cmd->add_option("--out", args.out_path, "write JSON lines here instead of stdout");
  cmd->add_option("--csv", args.csv_path, "also write plot-ready CSV here");
  cmd->add_option("--modulation", args.modulation, "bpsk|qpsk|qam16");
  cmd->add_option("--users", args.users, "number of senders N_t (= AP antennas)");
  cmd->add_option("--channel", args.channel, "phase|rayleigh|trace");
  cmd->add_option("--trace", args.trace, "channel trace CSV");
  cmd->add_option("--snr-db", args.snr_db, "SNR list, e.g. 10,20 or inf");
  cmd->add_option("--instances", args.instances, "channel uses per setting");
  cmd->add_option("--seed", args.seed, "base RNG seed");
  cmd->add_option("--jf-grid,--jf", args.jf_grid, "chain penalty grid: a:b:step or list");
  cmd->add_option("--ta", args.ta, "anneal time grid (us)");
  cmd->add_option("--tp", args.tp, "pause time grid (us, 0 = no pause)");
  cmd->add_option("--sp", args.sp, "pause position grid (fraction)");
  cmd->add_option("--backend", args.backend, "exact|sa");
  cmd->add_option("--anneals", args.anneals, "anneals per run (N_a)");
  cmd->add_flag("--improved-range", args.improved_range, "negative couplers down to -2");
  cmd->add_flag("--standard-range", args.standard_range, "couplers clamped to [-1,1]");
  cmd->add_option("--target-ber", args.target_ber, "TTB target bit error rate");
  cmd->add_option("--target-fer", args.target_fer, "TTF target frame error rate");
  cmd->add_option("--frame-bytes", args.frame_bytes, "frame size for FER");
  cmd->add_option("--chip-nodes", args.chip_nodes, "chip qubit budget");
  cmd->add_option("--sweeps-per-us", args.sweeps_per_us, "SA sweeps per microsecond");
  cmd->add_option("--ice", args.ice, "on|off: control-error noise model");
  cmd->add_flag("--no-parallelization", args.no_parallelization, "report times for one copy");
  cmd->add_option("--threads", args.threads, "worker threads (0 = hardware)");
}

json overrides_from_args(const CLI::App* cmd, const CliArgs& args) {
  json j = json::object();
  auto passed = [&](const std::string& name) { return cmd->count(name) > 0; };
  if (passed("--modulation")) j["modulation"] = args.modulation;
  if (passed("--users")) j["users"] = args.users;
  if (passed("--channel")) j["channel"] = args.channel;
  if (passed("--trace")) j["trace"] = args.trace;
  if (passed("--snr-db")) j["snr_db"] = parse_double_list(args.snr_db, "--snr-db");
  if (passed("--instances")) j["instances"] = args.instances;
  if (passed("--seed")) j["seed"] = args.seed;
  if (passed("--jf-grid")) j["jf"] = parse_grid(args.jf_grid, "--jf-grid");
  if (passed("--ta")) j["ta"] = parse_double_list(args.ta, "--ta");
  if (passed("--tp")) j["tp"] = parse_double_list(args.tp, "--tp");
  if (passed("--sp")) j["sp"] = parse_double_list(args.sp, "--sp");
  if (passed("--backend")) j["backend"] = args.backend;
  if (passed("--anneals")) j["anneals"] = args.anneals;
  if (args.improved_range && args.standard_range)
    throw config_error("choose one of --improved-range / --standard-range");
  if (args.improved_range) j["range"] = "improved";
  if (args.standard_range) j["range"] = "standard";
  if (passed("--target-ber")) j["target_ber"] = args.target_ber;
  if (passed("--target-fer")) j["target_fer"] = args.target_fer;
  if (passed("--frame-bytes")) j["frame_bytes"] = args.frame_bytes;
  if (passed("--chip-nodes")) j["chip_nodes"] = args.chip_nodes;
  if (passed("--sweeps-per-us")) j["sweeps_per_us"] = args.sweeps_per_us;
  if (passed("--ice")) {
    if (args.ice != "on" && args.ice != "off") throw config_error("--ice takes on|off");
    j["ice"] = (args.ice == "on");
  }
  if (args.no_parallelization) j["parallelization"] = false;
  if (passed("--threads")) j["threads"] = args.threads;
  return j;
}

ExperimentConfig make_config(const CLI::App* cmd, const CliArgs& args, bool sweep_defaults) {
  ExperimentConfig cfg;
  const json file =
      args.config_path.empty() ? json::object() : load_config_file(args.config_path);
  apply_config(file, cfg);
  const json overrides = overrides_from_args(cmd, args);
  if (sweep_defaults && !overrides.contains("jf") && !file.contains("jf"))
    cfg.jf_grid = parse_grid("1.0:10.0:0.5", "--jf-grid");
  apply_config(overrides, cfg);
  cfg.snr_list();
  cfg.validate();
  return cfg;
}

// Emits JSON lines to stdout or --out, with optional CSV mirroring.
class Emitter {
 public:
  Emitter(const std::string& out_path, const std::string& csv_path) {
    if (!out_path.empty()) {
      file_.open(out_path);
      if (!file_) throw config_error("cannot open output file: " + out_path);
    }
    if (!csv_path.empty()) {
      csv_.open(csv_path);
      if (!csv_) throw config_error("cannot open CSV file: " + csv_path);
      csv_ << csv_header() << '\n';
    }
  }

  void operator()(const json& record) {
    (file_.is_open() ? file_ : std::cout) << record.dump() << '\n';
    if (csv_.is_open()) csv_ << csv_row(record) << '\n';
  }

 private:
  std::ofstream file_;
  std::ofstream csv_;
};

ChannelModel model_for(const ExperimentConfig& cfg) {
  ChannelModel model;
  model.kind = cfg.channel;
  if (cfg.channel == ChannelKind::Trace)
    model.trace = std::make_shared<ChannelTrace>(ChannelTrace::load(cfg.trace_path));
  return model;
}

GridPoint single_point(const ExperimentConfig& cfg) {
  if (cfg.jf_grid.size() > 1 || cfg.ta_grid.size() > 1 || cfg.tp_grid.size() > 1 ||
      cfg.sp_grid.size() > 1)
    throw config_error("this subcommand takes single parameter values; use `sweep` for grids");
  return {cfg.jf_grid[0], cfg.ta_grid[0], cfg.tp_grid[0], cfg.sp_grid[0]};
}

int cmd_reduce(const CLI::App* cmd, const CliArgs& args, const std::string& form,
               bool with_instance) {
  const ExperimentConfig cfg = make_config(cmd, args, false);
  const ChannelModel model = model_for(cfg);
  const Constellation& c = Constellation::get(cfg.modulation);
  Emitter emit(args.out_path, "");
  for (size_t si = 0; si < cfg.snr_db.size(); ++si)
    for (int i = 0; i < cfg.instances; ++i) {
      const uint64_t seed = instance_seed_for(cfg.seed, i);
      const ChannelUse use =
          make_channel_use(model, c, cfg.n_t, cfg.n_t, cfg.snr_db[si], seed);
      const IsingProblem ising = ml_to_ising(use.h, use.y, c);
      json dump = form == "qubo" ? to_json(ising_to_qubo(ising)) : to_json(ising);
      if (with_instance) {
        dump["instance_id"] = i;
        dump["instance_seed"] = seed;
        dump["modulation"] = std::string(to_string(cfg.modulation));
        dump["n_t"] = cfg.n_t;
        dump["snr_db"] = cfg.snr_db[si] == kNoiseless ? json("inf") : json(cfg.snr_db[si]);
        json bits = json::array();
        for (uint8_t b : use.tx_bits) bits.push_back(static_cast<int>(b));
        dump["tx_bits"] = bits;
      }
      emit(dump);
    }
  return 0;
}

int cmd_embed(const CLI::App* cmd, const CliArgs& args) {
  const ExperimentConfig cfg = make_config(cmd, args, false);
  const ChannelModel model = model_for(cfg);
  const Constellation& c = Constellation::get(cfg.modulation);
  const GridPoint gp = single_point(cfg);
  const int n = cfg.n_t * c.bits_per_symbol();
  const int side = std::max(1, static_cast<int>(std::ceil(std::sqrt(cfg.chip_nodes / 8.0))));
  const Embedding embedding = clique_embed(n, ChimeraGraph(side, side));
  Emitter emit(args.out_path, "");
  for (size_t si = 0; si < cfg.snr_db.size(); ++si)
    for (int i = 0; i < cfg.instances; ++i) {
      const uint64_t seed = instance_seed_for(cfg.seed, i);
      const ChannelUse use =
          make_channel_use(model, c, cfg.n_t, cfg.n_t, cfg.snr_db[si], seed);
      const EmbeddedIsing emb =
          embed_ising(ml_to_ising(use.h, use.y, c), embedding, gp.jf, cfg.range_mode);
      if (emb.clamped_count > 0)
        std::cerr << "warning: instance " << i << ": " << emb.clamped_count
                  << " coefficients clamped (squeeze " << emb.squeeze << ")\n";
      json dump = to_json(emb);
      dump["instance_id"] = i;
      dump["instance_seed"] = seed;
      dump["p_f"] = parallelization_factor(n, cfg.chip_nodes);
      emit(dump);
    }
  return 0;
}

int cmd_solve(const CLI::App* cmd, const CliArgs& args) {
  const ExperimentConfig cfg = make_config(cmd, args, false);
  const ChannelModel model = model_for(cfg);
  const Constellation& c = Constellation::get(cfg.modulation);
  const GridPoint gp = single_point(cfg);
  const int n = cfg.n_t * c.bits_per_symbol();
  Emitter emit(args.out_path, "");
  for (size_t si = 0; si < cfg.snr_db.size(); ++si)
    for (int i = 0; i < cfg.instances; ++i) {
      const uint64_t iseed = instance_seed_for(cfg.seed, i);
      const ChannelUse use =
          make_channel_use(model, c, cfg.n_t, cfg.n_t, cfg.snr_db[si], iseed);
      const IsingProblem ising = ml_to_ising(use.h, use.y, c);
      AnnealSchedule sched{gp.ta, gp.tp, gp.sp, cfg.anneals, cfg.sweeps_per_us};
      Rng rng(solver_seed_for(cfg.seed, i, 0, si));
      SampleSet samples;
      if (cfg.backend == Backend::Exact) {
        samples = anneal_run(ising, nullptr, Backend::Exact, sched, cfg.ice, rng);
      } else {
        const int side =
            std::max(1, static_cast<int>(std::ceil(std::sqrt(cfg.chip_nodes / 8.0))));
        const Embedding embedding = clique_embed(n, ChimeraGraph(side, side));
        const EmbeddedIsing emb =
            embed_ising(ising, embedding, gp.jf, cfg.range_mode);
        samples = anneal_run(ising, &emb, Backend::Sa, sched, cfg.ice, rng);
      }
      for (const auto& rec : samples.records) {
        json line = to_json(rec);
        if (cfg.instances > 1) line["instance_id"] = i;
        emit(line);
      }
    }
  return 0;
}

// Per-record failures map to the documented exit codes: capacity beats
// config beats runtime.
int exit_code_for(const std::vector<std::string>& kinds) {
  int code = 0;
  for (const std::string& kind : kinds) {
    if (kind == "capacity") return 3;
    if (kind == "config") code = std::max(code, 2);
    else if (!kind.empty()) code = std::max(code, 1);
  }
  return code;
}

int cmd_decode(const CLI::App* cmd, const CliArgs& args) {
  const ExperimentConfig cfg = make_config(cmd, args, false);
  const GridPoint gp = single_point(cfg);
  Emitter emit(args.out_path, args.csv_path);
  std::vector<std::string> kinds;
  for (size_t si = 0; si < cfg.snr_db.size(); ++si)
    for (int i = 0; i < cfg.instances; ++i) {
      const InstanceRecord rec =
          run_instance(cfg, gp, cfg.snr_db[si], i, instance_seed_for(cfg.seed, i),
                       solver_seed_for(cfg.seed, i, 0, si));
      kinds.push_back(rec.error_kind);
      emit(record_json(rec, cfg));
    }
  return exit_code_for(kinds);
}

int cmd_sweep(const CLI::App* cmd, const CliArgs& args) {
  const ExperimentConfig cfg = make_config(cmd, args, true);
  Emitter emit(args.out_path, args.csv_path);
  sweep(cfg, [&](const json& record) { emit(record); });
  return 0;
}

int cmd_baseline(const CLI::App* cmd, const CliArgs& args, const std::string& decoder) {
  const ExperimentConfig cfg = make_config(cmd, args, false);
  const ChannelModel model = model_for(cfg);
  const Constellation& c = Constellation::get(cfg.modulation);
  Emitter emit(args.out_path, args.csv_path);
  std::vector<std::string> decoders;
  if (decoder == "all")
    decoders = {"ml", "zf", "sphere"};
  else if (decoder == "ml" || decoder == "zf" || decoder == "sphere")
    decoders = {decoder};
  else
    throw config_error("--decoder takes ml|zf|sphere|all");

  long long total_runs = 0, total_failed = 0;
  for (size_t si = 0; si < cfg.snr_db.size(); ++si) {
    struct Tally { long long errors = 0, bits = 0, visited = 0, runs = 0, failed = 0; };
    std::map<std::string, Tally> tally;
    for (int i = 0; i < cfg.instances; ++i) {
      const ChannelUse use = make_channel_use(model, c, cfg.n_t, cfg.n_t, cfg.snr_db[si],
                                              instance_seed_for(cfg.seed, i));
      for (const std::string& d : decoders) {
        json rec = {{"type", "baseline"},
                    {"decoder", d},
                    {"instance_id", i},
                    {"modulation", std::string(to_string(cfg.modulation))},
                    {"n_t", cfg.n_t},
                    {"snr_db", cfg.snr_db[si] == kNoiseless ? json("inf") : json(cfg.snr_db[si])}};
        try {
          std::vector<uint8_t> bits;
          if (d == "ml") {
            bits = brute_force_ml(use.h, use.y, c);
          } else if (d == "zf") {
            bits = zero_forcing(use.h, use.y, c);
          } else {
            auto [sd_bits, stats] = sphere_decode(use.h, use.y, c);
            bits = std::move(sd_bits);
            rec["visited"] = stats.visited;
            rec["metric"] = stats.metric;
            tally[d].visited += stats.visited;
          }
          int errs = 0;
          for (size_t b = 0; b < bits.size(); ++b) errs += bits[b] != use.tx_bits[b];
          rec["bit_errors"] = errs;
          rec["n_bits"] = bits.size();
          tally[d].errors += errs;
          tally[d].bits += static_cast<long long>(bits.size());
          tally[d].runs += 1;
        } catch (const std::exception& e) {
          rec["error"] = e.what();
          tally[d].failed += 1;
        }
        emit(rec);
      }
    }
    for (const std::string& d : decoders) {
      const Tally& t = tally[d];
      json summary = {{"type", "baseline_summary"},
                      {"decoder", d},
                      {"snr_db", cfg.snr_db[si] == kNoiseless ? json("inf") : json(cfg.snr_db[si])},
                      {"instances", t.runs},
                      {"failed", t.failed},
                      {"ber", t.bits > 0 ? json(static_cast<double>(t.errors) / t.bits)
                                         : json(nullptr)}};
      if (d == "sphere" && t.runs > 0)
        summary["mean_visited"] = static_cast<double>(t.visited) / t.runs;
      total_runs += t.runs;
      total_failed += t.failed;
      emit(summary);
    }
  }
  return total_runs == 0 && total_failed > 0 ? 3 : 0;
}

int cmd_trace(const CLI::App* cmd, const CliArgs& args, bool validate_only) {
  CliArgs forced = args;
  if (forced.trace.empty()) throw config_error("trace: --trace FILE is required");
  const ExperimentConfig base = make_config(cmd, args, false);
  if (validate_only) {
    const ChannelTrace trace = ChannelTrace::load(forced.trace);
    double power = 0.0;
    for (int u = 0; u < trace.n_uses(); ++u) power += trace.use(u).squaredNorm();
    power /= static_cast<double>(trace.n_uses()) * trace.n_rx() * trace.n_tx();
    Emitter emit(args.out_path, "");
    emit({{"type", "trace_summary"},
          {"uses", trace.n_uses()},
          {"rx", trace.n_rx()},
          {"tx", trace.n_tx()},
          {"mean_entry_power", power}});
    return 0;
  }
  ExperimentConfig cfg = base;
  cfg.channel = ChannelKind::Trace;
  cfg.trace_path = forced.trace;
  // Traces carry their own noise: only add AWGN when the user asked for it
  // (flag or config key), otherwise run them as-is.
  bool snr_given = cmd->count("--snr-db") > 0;
  if (!snr_given && !args.config_path.empty())
    snr_given = load_config_file(args.config_path).contains("snr_db");
  if (!snr_given) cfg.snr_db = {kNoiseless};
  cfg.validate();
  const GridPoint gp = single_point(cfg);
  Emitter emit(args.out_path, args.csv_path);
  std::vector<std::string> kinds;
  for (size_t si = 0; si < cfg.snr_db.size(); ++si)
    for (int i = 0; i < cfg.instances; ++i) {
      const InstanceRecord rec =
          run_instance(cfg, gp, cfg.snr_db[si], i, instance_seed_for(cfg.seed, i),
                       solver_seed_for(cfg.seed, i, 0, si));
      kinds.push_back(rec.error_kind);
      emit(record_json(rec, cfg));
    }
  return exit_code_for(kinds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"annealing-based maximum-likelihood MIMO detection toolkit"};
  app.require_subcommand(1);

  CliArgs args;
  std::string reduce_form = "ising";
  bool reduce_with_instance = false;
  std::string baseline_decoder = "all";
  bool trace_validate_only = false;

  CLI::App* reduce = app.add_subcommand("reduce", "compile instances to Ising/QUBO dumps");
  add_common_options(reduce, args);
  reduce->add_option("--form", reduce_form, "ising|qubo dump format");
  reduce->add_flag("--with-instance", reduce_with_instance, "attach instance metadata");

  CLI::App* embed = app.add_subcommand("embed", "emit embedded problems for the chip graph");
  add_common_options(embed, args);

  CLI::App* solve = app.add_subcommand("solve", "emit anneal-run sample sets");
  add_common_options(solve, args);

  CLI::App* decode = app.add_subcommand("decode", "full pipeline with metric records");
  add_common_options(decode, args);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "grid sweep with Fix/Opt summaries");
  add_common_options(sweep_cmd, args);

  CLI::App* baseline = app.add_subcommand("baseline", "classical reference decoders");
  add_common_options(baseline, args);
  baseline->add_option("--decoder", baseline_decoder, "ml|zf|sphere|all");

  CLI::App* trace_cmd = app.add_subcommand("trace", "trace-driven channel runs");
  add_common_options(trace_cmd, args);
  trace_cmd->add_flag("--validate-only", trace_validate_only, "parse and summarize only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (reduce->parsed()) return cmd_reduce(reduce, args, reduce_form, reduce_with_instance);
    if (embed->parsed()) return cmd_embed(embed, args);
    if (solve->parsed()) return cmd_solve(solve, args);
    if (decode->parsed()) return cmd_decode(decode, args);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_cmd, args);
    if (baseline->parsed()) return cmd_baseline(baseline, args, baseline_decoder);
    if (trace_cmd->parsed()) return cmd_trace(trace_cmd, args, trace_validate_only);
  } catch (const amdet::capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return 3;
  } catch (const amdet::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
