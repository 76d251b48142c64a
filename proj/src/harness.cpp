#include "amdet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "amdet/reduction.hpp"

namespace amdet {

uint64_t instance_seed_for(uint64_t base_seed, int instance_id) {
  return Rng(base_seed).fork(0x696e7374ULL + instance_id).seed();
}

uint64_t solver_seed_for(uint64_t base_seed, int instance_id, size_t grid_index,
                         size_t snr_index) {
  return Rng(base_seed)
      .fork(0x736f6c76ULL + instance_id)
      .fork((grid_index << 20) ^ snr_index)
      .seed();
}

namespace {

ChannelModel build_model(const ExperimentConfig& cfg) {
  ChannelModel model;
  model.kind = cfg.channel;
  if (cfg.channel == ChannelKind::Trace)
    model.trace = std::make_shared<ChannelTrace>(ChannelTrace::load(cfg.trace_path));
  return model;
}

ChimeraGraph chip_graph(const ExperimentConfig& cfg) {
  const int side = std::max(1, static_cast<int>(std::ceil(std::sqrt(cfg.chip_nodes / 8.0))));
  return ChimeraGraph(side, side);
}

std::vector<long long> ber_curve_grid(int anneals) {
  std::vector<long long> grid;
  for (long long base = 1; base <= anneals; base *= 10)
    for (long long m : {1, 2, 5}) {
      const long long v = base * m;
      if (v <= anneals) grid.push_back(v);
    }
  if (grid.empty() || grid.back() != anneals) grid.push_back(anneals);
  return grid;
}

// Target FER converted to the BER that achieves it at the frame size.
double ber_target_for_fer(double target_fer, long long frame_bits) {
  return -std::expm1(std::log1p(-target_fer) / static_cast<double>(frame_bits));
}

void run_tasks(int n_tasks, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 1 || n_tasks <= 1) {
    for (int t = 0; t < n_tasks; ++t) fn(t);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(threads, n_tasks);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int t = next.fetch_add(1); t < n_tasks; t = next.fetch_add(1)) fn(t);
    });
  for (auto& th : pool) th.join();
}

InstanceRecord run_instance_impl(const ExperimentConfig& cfg, const ChannelModel& model,
                                 const GridPoint& gp, double snr_db, int instance_id,
                                 uint64_t instance_seed, uint64_t solver_seed) {
  const Constellation& c = Constellation::get(cfg.modulation);
  InstanceRecord rec;
  rec.instance_id = instance_id;
  rec.instance_seed = instance_seed;
  rec.solver_seed = solver_seed;
  rec.snr_db = snr_db;
  rec.params = gp;
  rec.n_logical = cfg.n_t * c.bits_per_symbol();
  rec.physical_qubits = physical_qubit_count(rec.n_logical);
  rec.p_f = cfg.use_parallelization ? parallelization_factor(rec.n_logical, cfg.chip_nodes) : 1;

  try {
    if (rec.p_f == 0) {
      rec.embeddable = false;
      throw capacity_error("non-embeddable: problem needs " +
                           std::to_string(rec.physical_qubits) + " qubits, chip has " +
                           std::to_string(cfg.chip_nodes));
    }

    const ChannelUse use = make_channel_use(model, c, cfg.n_t, cfg.n_t, snr_db, instance_seed);
    const IsingProblem ising = ml_to_ising(use.h, use.y, c);

    AnnealSchedule sched;
    sched.t_a_us = gp.ta;
    sched.t_p_us = gp.tp;
    sched.s_p = gp.sp;
    sched.n_a = cfg.anneals;
    sched.sweeps_per_us = cfg.sweeps_per_us;

    Rng solver_rng(solver_seed);
    SampleSet samples;
    if (cfg.backend == Backend::Exact) {
      samples = anneal_run(ising, nullptr, Backend::Exact, sched, cfg.ice, solver_rng);
    } else {
      const Embedding embedding = clique_embed(rec.n_logical, chip_graph(cfg));
      const EmbeddedIsing emb = embed_ising(ising, embedding, gp.jf, cfg.range_mode);
      rec.clamped = emb.clamped_count;
      rec.squeeze = emb.squeeze;
      samples = anneal_run(ising, &emb, Backend::Sa, sched, cfg.ice, solver_rng);
    }

    const RankedSolutions ranked = rank_solutions(samples, use.tx_bits, c);
    rec.p_ground = ranked.p.front();
    rec.tts_us = tts(rec.p_ground, gp.ta + gp.tp);
    for (long long na : ber_curve_grid(cfg.anneals))
      rec.ber_curve.emplace_back(na, expected_ber(ranked, na));
    rec.ttb = ttb(ranked, cfg.target_ber, gp.ta, gp.tp, rec.p_f);
    rec.ttf = ttb(ranked, ber_target_for_fer(cfg.target_fer, cfg.frame_bits), gp.ta, gp.tp,
                  rec.p_f);
    rec.ber_at_na = expected_ber(ranked, cfg.anneals);
    rec.fer_at_na = fer(std::min(1.0, rec.ber_at_na), cfg.frame_bits);
    rec.rank1_bit_errors = ranked.bit_errors.front();
    rec.decoded_ok = rec.rank1_bit_errors == 0;
  } catch (const capacity_error& e) {
    rec.embeddable = false;
    rec.error = e.what();
    rec.error_kind = "capacity";
  } catch (const config_error& e) {
    rec.error = e.what();
    rec.error_kind = "config";
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.error_kind = "runtime";
  }
  return rec;
}

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::json ttb_json(const TtbResult& t, double target) {
  return {{"target", target},
          {"value", finite_or_null(t.time_us)},
          {"n_a", t.reachable ? nlohmann::json(t.n_a) : nlohmann::json(nullptr)},
          {"reachable", t.reachable},
          {"asymptotic_ber", t.asymptote}};
}

}  // namespace

InstanceRecord run_instance(const ExperimentConfig& cfg, const GridPoint& gp, double snr_db,
                            int instance_id, uint64_t instance_seed, uint64_t solver_seed) {
  return run_instance_impl(cfg, build_model(cfg), gp, snr_db, instance_id, instance_seed,
                           solver_seed);
}

nlohmann::json record_json(const InstanceRecord& rec, const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["type"] = "instance";
  j["instance_id"] = rec.instance_id;
  j["modulation"] = std::string(to_string(cfg.modulation));
  j["n_t"] = cfg.n_t;
  j["snr_db"] = rec.snr_db == kNoiseless ? nlohmann::json("inf") : nlohmann::json(rec.snr_db);
  j["params"] = {{"jf", rec.params.jf},
                 {"ta", rec.params.ta},
                 {"tp", rec.params.tp},
                 {"sp", rec.params.sp}};
  j["instance_seed"] = rec.instance_seed;
  j["solver_seed"] = rec.solver_seed;
  j["n_logical"] = rec.n_logical;
  j["physical_qubits"] = rec.physical_qubits;
  j["p_f"] = rec.p_f;
  j["embeddable"] = rec.embeddable;
  if (!rec.error.empty()) {
    j["error"] = rec.error;
    j["error_kind"] = rec.error_kind;
    j["config"] = config_json(cfg);
    return j;
  }
  j["clamped"] = rec.clamped;
  j["squeeze"] = rec.squeeze;
  j["p_ground"] = rec.p_ground;
  j["tts"] = finite_or_null(rec.tts_us);
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& [na, ber] : rec.ber_curve) curve.push_back({na, ber});
  j["ber_curve"] = curve;
  j["ttb"] = ttb_json(rec.ttb, cfg.target_ber);
  j["ttf"] = ttb_json(rec.ttf, cfg.target_fer);
  j["ber"] = rec.ber_at_na;
  j["fer"] = {{"frame_bits", cfg.frame_bits}, {"value", rec.fer_at_na}};
  j["rank1_bit_errors"] = rec.rank1_bit_errors;
  j["decoded_ok"] = rec.decoded_ok;
  j["config"] = config_json(cfg);
  return j;
}

nlohmann::json rerun_record(const nlohmann::json& record) {
  ExperimentConfig cfg = config_from_json(record.at("config"));
  GridPoint gp;
  gp.jf = record.at("params").at("jf").get<double>();
  gp.ta = record.at("params").at("ta").get<double>();
  gp.tp = record.at("params").at("tp").get<double>();
  gp.sp = record.at("params").at("sp").get<double>();
  const auto& snr = record.at("snr_db");
  const double snr_db = snr.is_string() ? kNoiseless : snr.get<double>();
  const InstanceRecord rec =
      run_instance(cfg, gp, snr_db, record.at("instance_id").get<int>(),
                   record.at("instance_seed").get<uint64_t>(),
                   record.at("solver_seed").get<uint64_t>());
  return record_json(rec, cfg);
}

namespace {

double percentile(std::vector<double> v, double pct) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const size_t idx = static_cast<size_t>(
      std::max(0.0, std::ceil(pct / 100.0 * static_cast<double>(v.size())) - 1.0));
  return v[std::min(idx, v.size() - 1)];
}

nlohmann::json stat_block(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return {{"median", finite_or_null(percentile(values, 50))},
          {"mean", finite_or_null(values.empty() ? 0.0 : sum / values.size())},
          {"p10", finite_or_null(percentile(values, 10))},
          {"p90", finite_or_null(percentile(values, 90))}};
}

}  // namespace

void sweep(const ExperimentConfig& cfg_in,
           const std::function<void(const nlohmann::json&)>& emit) {
  ExperimentConfig cfg = cfg_in;
  cfg.snr_list();
  cfg.validate();
  const ChannelModel model = build_model(cfg);

  std::vector<GridPoint> grid;
  for (double jf : cfg.jf_grid)
    for (double ta : cfg.ta_grid)
      for (double tp : cfg.tp_grid)
        for (double sp : cfg.sp_grid) grid.push_back({jf, ta, tp, sp});

  const size_t n_snr = cfg.snr_db.size();
  const size_t n_grid = grid.size();
  const size_t n_inst = static_cast<size_t>(cfg.instances);
  const size_t total = n_snr * n_grid * n_inst;
  std::vector<InstanceRecord> records(total);

  run_tasks(static_cast<int>(total), cfg.threads, [&](int t) {
    const size_t si = t / (n_grid * n_inst);
    const size_t gi = (t / n_inst) % n_grid;
    const size_t ii = t % n_inst;
    records[t] = run_instance_impl(
        cfg, model, grid[gi], cfg.snr_db[si], static_cast<int>(ii),
        instance_seed_for(cfg.seed, static_cast<int>(ii)),
        solver_seed_for(cfg.seed, static_cast<int>(ii), gi, si));
  });

  for (const auto& rec : records) emit(record_json(rec, cfg));

  // Per-SNR summaries: Fix picks the grid point with the best median TTB
  // across instances; Opt takes each instance's best grid point.
  for (size_t si = 0; si < n_snr; ++si) {
    auto ttb_of = [&](size_t gi, size_t ii) -> double {
      return records[(si * n_grid + gi) * n_inst + ii].ttb.time_us;
    };
    size_t fix_gi = 0;
    double fix_median = std::numeric_limits<double>::infinity();
    for (size_t gi = 0; gi < n_grid; ++gi) {
      std::vector<double> ttbs(n_inst);
      for (size_t ii = 0; ii < n_inst; ++ii) ttbs[ii] = ttb_of(gi, ii);
      const double med = percentile(ttbs, 50);
      if (med < fix_median) {
        fix_median = med;
        fix_gi = gi;
      }
    }

    std::vector<double> fix_ttb(n_inst), opt_ttb(n_inst), fix_ber(n_inst), opt_ber(n_inst);
    for (size_t ii = 0; ii < n_inst; ++ii) {
      fix_ttb[ii] = ttb_of(fix_gi, ii);
      fix_ber[ii] = records[(si * n_grid + fix_gi) * n_inst + ii].ber_at_na;
      double best = std::numeric_limits<double>::infinity();
      double best_ber = 1.0;
      for (size_t gi = 0; gi < n_grid; ++gi) {
        if (ttb_of(gi, ii) < best) best = ttb_of(gi, ii);
        best_ber = std::min(best_ber, records[(si * n_grid + gi) * n_inst + ii].ber_at_na);
      }
      opt_ttb[ii] = best;
      opt_ber[ii] = best_ber;
    }
    auto reachable_fraction = [](const std::vector<double>& v) {
      size_t r = 0;
      for (double x : v) r += std::isfinite(x) ? 1 : 0;
      return v.empty() ? 0.0 : static_cast<double>(r) / v.size();
    };
    const nlohmann::json snr_json = cfg.snr_db[si] == kNoiseless
                                        ? nlohmann::json("inf")
                                        : nlohmann::json(cfg.snr_db[si]);
    emit({{"type", "summary"},
          {"strategy", "fix"},
          {"snr_db", snr_json},
          {"params",
           {{"jf", grid[fix_gi].jf},
            {"ta", grid[fix_gi].ta},
            {"tp", grid[fix_gi].tp},
            {"sp", grid[fix_gi].sp}}},
          {"n_instances", cfg.instances},
          {"ttb_us", stat_block(fix_ttb)},
          {"ttb_reachable_fraction", reachable_fraction(fix_ttb)},
          {"ber", stat_block(fix_ber)}});
    emit({{"type", "summary"},
          {"strategy", "opt"},
          {"snr_db", snr_json},
          {"n_instances", cfg.instances},
          {"ttb_us", stat_block(opt_ttb)},
          {"ttb_reachable_fraction", reachable_fraction(opt_ttb)},
          {"ber", stat_block(opt_ber)}});
  }
}

std::string csv_header() {
  return "type,instance_id,modulation,n_t,snr_db,jf,ta,tp,sp,p_f,physical_qubits,"
         "p_ground,tts_us,ber,fer,ttb_us,ttb_na,ttf_us,rank1_bit_errors,decoded_ok,error";
}

namespace {

std::string csv_field(const nlohmann::json& j, std::initializer_list<const char*> path) {
  const nlohmann::json* cur = &j;
  for (const char* key : path) {
    if (!cur->is_object() || !cur->contains(key)) return "";
    cur = &(*cur)[key];
  }
  if (cur->is_null()) return "";
  if (cur->is_string()) return cur->get<std::string>();
  return cur->dump();
}

}  // namespace

std::string csv_row(const nlohmann::json& r) {
  std::ostringstream out;
  out << csv_field(r, {"type"}) << ',' << csv_field(r, {"instance_id"}) << ','
      << csv_field(r, {"modulation"}) << ',' << csv_field(r, {"n_t"}) << ','
      << csv_field(r, {"snr_db"}) << ',' << csv_field(r, {"params", "jf"}) << ','
      << csv_field(r, {"params", "ta"}) << ',' << csv_field(r, {"params", "tp"}) << ','
      << csv_field(r, {"params", "sp"}) << ',' << csv_field(r, {"p_f"}) << ','
      << csv_field(r, {"physical_qubits"}) << ',' << csv_field(r, {"p_ground"}) << ','
      << csv_field(r, {"tts"}) << ',' << csv_field(r, {"ber"}) << ','
      << csv_field(r, {"fer", "value"}) << ',' << csv_field(r, {"ttb", "value"}) << ','
      << csv_field(r, {"ttb", "n_a"}) << ',' << csv_field(r, {"ttf", "value"}) << ','
      << csv_field(r, {"rank1_bit_errors"}) << ',' << csv_field(r, {"decoded_ok"}) << ','
      << csv_field(r, {"error"});
  return out.str();
}

}  // namespace amdet
