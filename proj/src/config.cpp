#include "amdet/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

namespace amdet {

std::vector<double>& ExperimentConfig::snr_list() {
  if (snr_db.empty())
    snr_db = {channel == ChannelKind::Trace ? kNoiseless : 20.0};
  return snr_db;
}

void ExperimentConfig::validate() const {
  if (n_t < 1) throw config_error("users must be >= 1");
  if (instances < 1) throw config_error("instances must be >= 1");
  if (anneals < 1) throw config_error("anneals must be >= 1");
  if (jf_grid.empty() || ta_grid.empty() || tp_grid.empty() || sp_grid.empty())
    throw config_error("parameter grids must be non-empty");
  for (double jf : jf_grid)
    if (!(jf > 0)) throw config_error("J_F values must be positive");
  if (channel == ChannelKind::Trace && trace_path.empty())
    throw config_error("trace channel requires a trace file");
  if (!(target_ber > 0) || target_ber >= 1) throw config_error("target_ber must be in (0, 1)");
  if (!(target_fer > 0) || target_fer >= 1) throw config_error("target_fer must be in (0, 1)");
  if (frame_bits < 1) throw config_error("frame size must be >= 1 bit");
  if (chip_nodes < 1) throw config_error("chip_nodes must be >= 1");
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

nlohmann::json toml_scalar(const std::string& raw, const std::string& where) {
  const std::string v = trim(raw);
  if (v.empty()) throw parse_error(where + ": empty value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') throw parse_error(where + ": unterminated string");
    return v.substr(1, v.size() - 2);
  }
  if (v == "true") return true;
  if (v == "false") return false;
  try {
    size_t pos = 0;
    if (v.find_first_of(".eE") == std::string::npos &&
        v.find("inf") == std::string::npos) {
      const long long i = std::stoll(v, &pos);
      if (pos == v.size()) return i;
    }
    pos = 0;
    if (v == "inf") return std::numeric_limits<double>::infinity();
    const double d = std::stod(v, &pos);
    if (pos == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw parse_error(where + ": cannot parse value '" + v + "'");
}

nlohmann::json toml_value(const std::string& raw, const std::string& where) {
  const std::string v = trim(raw);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw parse_error(where + ": unterminated array");
    nlohmann::json arr = nlohmann::json::array();
    std::string inner = v.substr(1, v.size() - 2);
    std::string cur;
    bool in_str = false;
    for (char ch : inner) {
      if (ch == '"') in_str = !in_str;
      if (ch == ',' && !in_str) {
        if (!trim(cur).empty()) arr.push_back(toml_scalar(cur, where));
        cur.clear();
      } else {
        cur += ch;
      }
    }
    if (!trim(cur).empty()) arr.push_back(toml_scalar(cur, where));
    return arr;
  }
  return toml_scalar(v, where);
}

}  // namespace

nlohmann::json parse_toml_subset(std::istream& in, const std::string& name) {
  nlohmann::json root = nlohmann::json::object();
  nlohmann::json* section = &root;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = name + ":" + std::to_string(line_no);
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw parse_error(where + ": malformed table header");
      const std::string table = trim(line.substr(1, line.size() - 2));
      if (table.empty()) throw parse_error(where + ": empty table name");
      section = &root[table];
      if (!section->is_object()) *section = nlohmann::json::object();
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) throw parse_error(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw parse_error(where + ": empty key");
    (*section)[key] = toml_value(line.substr(eq + 1), where);
  }
  return root;
}

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    try {
      return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw parse_error(path + ": " + e.what());
    }
  }
  return parse_toml_subset(in, path);
}

namespace {

std::vector<double> as_double_list(const nlohmann::json& v, const std::string& key) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& e : v) {
      if (e.is_string() && e.get<std::string>() == "inf")
        out.push_back(kNoiseless);
      else
        out.push_back(e.get<double>());
    }
  } else if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_string() && v.get<std::string>() == "inf") {
    out.push_back(kNoiseless);
  } else {
    throw config_error("config key '" + key + "' must be a number or array");
  }
  return out;
}

}  // namespace

void apply_config(const nlohmann::json& j, ExperimentConfig& cfg) {
  static const std::set<std::string> known = {
      "modulation", "users", "channel", "trace", "snr_db", "instances", "seed",
      "jf", "ta", "tp", "sp", "range", "backend", "anneals", "sweeps_per_us",
      "target_ber", "target_fer", "frame_bytes", "frame_bits", "parallelization",
      "chip_nodes", "threads", "ice"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw config_error("unknown config key: " + key);
    if (key == "modulation") cfg.modulation = modulation_from_string(value.get<std::string>());
    else if (key == "users") cfg.n_t = value.get<int>();
    else if (key == "channel") cfg.channel = channel_kind_from_string(value.get<std::string>());
    else if (key == "trace") cfg.trace_path = value.get<std::string>();
    else if (key == "snr_db") cfg.snr_db = as_double_list(value, key);
    else if (key == "instances") cfg.instances = value.get<int>();
    else if (key == "seed") cfg.seed = value.get<uint64_t>();
    else if (key == "jf") cfg.jf_grid = as_double_list(value, key);
    else if (key == "ta") cfg.ta_grid = as_double_list(value, key);
    else if (key == "tp") cfg.tp_grid = as_double_list(value, key);
    else if (key == "sp") cfg.sp_grid = as_double_list(value, key);
    else if (key == "range") {
      const std::string mode = value.get<std::string>();
      if (mode == "standard") cfg.range_mode = RangeMode::Standard;
      else if (mode == "improved") cfg.range_mode = RangeMode::Improved;
      else throw config_error("range must be 'standard' or 'improved'");
    } else if (key == "backend") cfg.backend = backend_from_string(value.get<std::string>());
    else if (key == "anneals") cfg.anneals = value.get<int>();
    else if (key == "sweeps_per_us") cfg.sweeps_per_us = value.get<double>();
    else if (key == "target_ber") cfg.target_ber = value.get<double>();
    else if (key == "target_fer") cfg.target_fer = value.get<double>();
    else if (key == "frame_bytes") cfg.frame_bits = value.get<long long>() * 8;
    else if (key == "frame_bits") cfg.frame_bits = value.get<long long>();
    else if (key == "parallelization") cfg.use_parallelization = value.get<bool>();
    else if (key == "chip_nodes") cfg.chip_nodes = value.get<long long>();
    else if (key == "threads") cfg.threads = value.get<int>();
    else if (key == "ice") {
      if (value.is_boolean()) {
        cfg.ice.enabled = value.get<bool>();
        continue;
      }
      if (!value.is_object()) throw config_error("ice must be a table or boolean");
      for (const auto& [ik, iv] : value.items()) {
        if (ik == "enabled") cfg.ice.enabled = iv.get<bool>();
        else if (ik == "f_mean") cfg.ice.f_mean = iv.get<double>();
        else if (ik == "f_std") cfg.ice.f_std = iv.get<double>();
        else if (ik == "g_mean") cfg.ice.g_mean = iv.get<double>();
        else if (ik == "g_std") cfg.ice.g_std = iv.get<double>();
        else throw config_error("unknown ice key: " + ik);
      }
    }
  }
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json snr = nlohmann::json::array();
  for (double s : cfg.snr_db)
    snr.push_back(s == kNoiseless ? nlohmann::json("inf") : nlohmann::json(s));
  return {
      {"modulation", std::string(to_string(cfg.modulation))},
      {"users", cfg.n_t},
      {"channel", std::string(to_string(cfg.channel))},
      {"trace", cfg.trace_path},
      {"snr_db", snr},
      {"instances", cfg.instances},
      {"seed", cfg.seed},
      {"jf", cfg.jf_grid},
      {"ta", cfg.ta_grid},
      {"tp", cfg.tp_grid},
      {"sp", cfg.sp_grid},
      {"range", cfg.range_mode == RangeMode::Improved ? "improved" : "standard"},
      {"backend", std::string(to_string(cfg.backend))},
      {"anneals", cfg.anneals},
      {"sweeps_per_us", cfg.sweeps_per_us},
      {"target_ber", cfg.target_ber},
      {"target_fer", cfg.target_fer},
      {"frame_bits", cfg.frame_bits},
      {"parallelization", cfg.use_parallelization},
      {"chip_nodes", cfg.chip_nodes},
      {"ice",
       {{"enabled", cfg.ice.enabled},
        {"f_mean", cfg.ice.f_mean},
        {"f_std", cfg.ice.f_std},
        {"g_mean", cfg.ice.g_mean},
        {"g_std", cfg.ice.g_std}}},
  };
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  apply_config(j, cfg);
  return cfg;
}

}  // namespace amdet
