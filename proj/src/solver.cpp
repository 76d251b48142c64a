#include "amdet/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace amdet {

Backend backend_from_string(std::string_view name) {
  if (name == "exact") return Backend::Exact;
  if (name == "sa") return Backend::Sa;
  throw config_error("unknown backend: " + std::string(name));
}

std::string_view to_string(Backend b) {
  return b == Backend::Exact ? "exact" : "sa";
}

namespace {

void check_exact_size(int n) {
  if (n < 1) throw std::invalid_argument("exact solver: empty problem");
  if (n > kExactMaxVars)
    throw capacity_error("exact solver: " + std::to_string(n) + " variables exceed the " +
                         std::to_string(kExactMaxVars) + "-variable enumeration cap");
}

// Visits all 2^n states in Gray-code order with incrementally maintained
// energy and local fields. visit(mask, energy); mask bit (n-1-i) <=> s_i=+1.
template <typename Visit>
void enumerate_states(const IsingProblem& p, Visit&& visit) {
  const int n = p.n;
  std::vector<int8_t> s(n, -1);
  std::vector<double> local(p.f);  // local_i = f_i + sum_j g_ij s_j
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      local[i] += (i < j ? p.coupling(i, j) : p.coupling(j, i)) * s[j];
    }
  double energy = p.offset;
  for (int i = 0; i < n; ++i) energy += p.f[i] * s[i];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) energy += p.coupling(i, j) * s[i] * s[j];

  uint32_t mask = 0;
  visit(mask, energy);
  const uint64_t total = uint64_t{1} << n;
  for (uint64_t k = 1; k < total; ++k) {
    const int bit = std::countr_zero(k);
    const int i = n - 1 - bit;
    energy += -2.0 * s[i] * local[i];
    s[i] = -s[i];
    mask ^= uint32_t{1} << bit;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      local[j] += 2.0 * (i < j ? p.coupling(i, j) : p.coupling(j, i)) * s[i];
    }
    visit(mask, energy);
  }
}

std::vector<int8_t> spins_from_mask(uint32_t mask, int n) {
  std::vector<int8_t> s(n);
  for (int i = 0; i < n; ++i) s[i] = (mask >> (n - 1 - i)) & 1u ? 1 : -1;
  return s;
}

}  // namespace

ExactSpectrum solve_exact(const IsingProblem& p) {
  check_exact_size(p.n);
  const size_t total = size_t{1} << p.n;
  ExactSpectrum out;
  out.energies.resize(total);
  out.states.resize(total);
  size_t idx = 0;
  enumerate_states(p, [&](uint32_t mask, double e) {
    out.energies[idx] = e;
    out.states[idx] = mask;
    ++idx;
  });
  std::vector<uint32_t> order(total);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    if (out.energies[a] != out.energies[b]) return out.energies[a] < out.energies[b];
    return out.states[a] < out.states[b];
  });
  ExactSpectrum sorted;
  sorted.energies.reserve(total);
  sorted.states.reserve(total);
  for (uint32_t o : order) {
    sorted.energies.push_back(out.energies[o]);
    sorted.states.push_back(out.states[o]);
  }
  sorted.ground_energy = sorted.energies.front();
  sorted.ground = spins_from_mask(sorted.states.front(), p.n);
  sorted.ground_count = 0;
  for (double e : sorted.energies) {
    if (e != sorted.ground_energy) break;
    ++sorted.ground_count;
  }
  return sorted;
}

std::vector<int8_t> exact_ground(const IsingProblem& p) {
  check_exact_size(p.n);
  double best = std::numeric_limits<double>::infinity();
  uint32_t best_mask = 0;
  enumerate_states(p, [&](uint32_t mask, double e) {
    if (e < best || (e == best && mask < best_mask)) {
      best = e;
      best_mask = mask;
    }
  });
  return spins_from_mask(best_mask, p.n);
}

IsingProblem apply_ice(const IsingProblem& p, const IceModel& m, Rng& rng) {
  IsingProblem out = p;
  if (!m.enabled) return out;
  for (double& fi : out.f) fi += rng.gaussian(m.f_mean, m.f_std);
  for (double& gij : out.g) gij += rng.gaussian(m.g_mean, m.g_std);
  return out;
}

EmbeddedIsing apply_ice(const EmbeddedIsing& p, const IceModel& m, Rng& rng) {
  EmbeddedIsing out = p;
  if (!m.enabled) return out;
  for (double& hv : out.h) hv += rng.gaussian(m.f_mean, m.f_std);
  for (auto& b : out.bonds) b.j += rng.gaussian(m.g_mean, m.g_std);
  return out;
}

namespace {

// CSR-structured spin glass the SA kernel runs on. Structure is built once
// per run; per-anneal ICE perturbs only the value arrays.
struct SpinGlass {
  int n = 0;
  std::vector<double> base_h, h;
  std::vector<double> base_j, j;
  std::vector<int> off;   // CSR offsets, size n+1
  std::vector<int> nbr;   // flattened neighbor ids
  std::vector<int> bond;  // flattened bond ids
};

SpinGlass build_glass(int n, const std::vector<double>& h,
                      const std::vector<std::tuple<int, int, double>>& bonds) {
  SpinGlass g;
  g.n = n;
  g.base_h = h;
  g.base_j.reserve(bonds.size());
  std::vector<int> degree(n, 0);
  for (const auto& [u, v, val] : bonds) {
    ++degree[u];
    ++degree[v];
    g.base_j.push_back(val);
  }
  g.off.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) g.off[i + 1] = g.off[i] + degree[i];
  g.nbr.resize(g.off[n]);
  g.bond.resize(g.off[n]);
  std::vector<int> fill(g.off.begin(), g.off.end() - 1);
  for (size_t b = 0; b < bonds.size(); ++b) {
    const auto& [u, v, val] = bonds[b];
    g.nbr[fill[u]] = v;
    g.bond[fill[u]++] = static_cast<int>(b);
    g.nbr[fill[v]] = u;
    g.bond[fill[v]++] = static_cast<int>(b);
  }
  g.h = g.base_h;
  g.j = g.base_j;
  return g;
}

SpinGlass glass_from_logical(const IsingProblem& p, bool include_zero_couplers) {
  std::vector<std::tuple<int, int, double>> bonds;
  for (int i = 0; i < p.n; ++i)
    for (int j = i + 1; j < p.n; ++j) {
      const double v = p.coupling(i, j);
      if (v != 0.0 || include_zero_couplers) bonds.emplace_back(i, j, v);
    }
  return build_glass(p.n, p.f, bonds);
}

SpinGlass glass_from_embedded(const EmbeddedIsing& e) {
  std::vector<std::tuple<int, int, double>> bonds;
  bonds.reserve(e.bonds.size());
  for (const auto& b : e.bonds) bonds.emplace_back(b.u, b.v, b.j);
  return build_glass(e.n_nodes(), e.h, bonds);
}

// Matches the draw order of the public apply_ice overloads.
void perturb_values(SpinGlass& g, const IceModel& m, Rng& rng) {
  if (!m.enabled) {
    g.h = g.base_h;
    g.j = g.base_j;
    return;
  }
  for (size_t i = 0; i < g.h.size(); ++i) g.h[i] = g.base_h[i] + rng.gaussian(m.f_mean, m.f_std);
  for (size_t b = 0; b < g.j.size(); ++b) g.j[b] = g.base_j[b] + rng.gaussian(m.g_mean, m.g_std);
}

// Geometric inverse-temperature ladder sized to the perturbed coefficients:
// hot enough that the largest possible move is accepted half the time, cold
// enough that every spin's strongest term freezes.
std::vector<double> build_betas(const SpinGlass& g, const AnnealSchedule& sched) {
  double max_gap = 0.0;
  double weakest_spin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.n; ++i) {
    double reach = std::abs(g.h[i]);
    double strongest = std::abs(g.h[i]);
    for (int e = g.off[i]; e < g.off[i + 1]; ++e) {
      const double j = std::abs(g.j[g.bond[e]]);
      reach += j;
      strongest = std::max(strongest, j);
    }
    max_gap = std::max(max_gap, 2.0 * reach);
    if (strongest > 0) weakest_spin = std::min(weakest_spin, strongest);
  }
  if (max_gap <= 0.0) max_gap = 1.0;
  if (!std::isfinite(weakest_spin)) weakest_spin = max_gap / 2.0;
  const double min_gap = std::max(2.0 * weakest_spin, max_gap * 1e-6);
  const double hot = std::log(2.0) / max_gap;
  const double cold = std::max(std::log(100.0) / min_gap, hot * 2.0);

  const int anneal_sweeps = std::max(1, static_cast<int>(std::lround(sched.sweeps_per_us * sched.t_a_us)));
  const int pause_sweeps = std::max(0, static_cast<int>(std::lround(sched.sweeps_per_us * sched.t_p_us)));
  std::vector<double> ladder(anneal_sweeps);
  for (int t = 0; t < anneal_sweeps; ++t) {
    const double frac = anneal_sweeps == 1 ? 1.0 : static_cast<double>(t) / (anneal_sweeps - 1);
    ladder[t] = hot * std::pow(cold / hot, frac);
  }
  if (pause_sweeps == 0) return ladder;
  const int pos = std::clamp(static_cast<int>(std::lround(sched.s_p * anneal_sweeps)), 0,
                             anneal_sweeps - 1);
  std::vector<double> betas;
  betas.reserve(anneal_sweeps + pause_sweeps);
  betas.insert(betas.end(), ladder.begin(), ladder.begin() + pos);
  betas.insert(betas.end(), pause_sweeps, ladder[pos]);
  betas.insert(betas.end(), ladder.begin() + pos, ladder.end());
  return betas;
}

std::vector<int8_t> sa_sample(const SpinGlass& g, const std::vector<double>& betas, Rng& rng) {
  std::vector<int8_t> s(g.n);
  for (auto& si : s) si = rng.coin() ? 1 : -1;
  std::vector<double> local(g.h);
  for (int i = 0; i < g.n; ++i)
    for (int e = g.off[i]; e < g.off[i + 1]; ++e) local[i] += g.j[g.bond[e]] * s[g.nbr[e]];

  for (double beta : betas) {
    for (int i = 0; i < g.n; ++i) {
      const double delta = -2.0 * s[i] * local[i];
      if (delta > 0.0 && rng.uniform() >= std::exp(-beta * delta)) continue;
      s[i] = -s[i];
      for (int e = g.off[i]; e < g.off[i + 1]; ++e)
        local[g.nbr[e]] += 2.0 * g.j[g.bond[e]] * s[i];
    }
  }
  return s;
}

void validate_schedule(const AnnealSchedule& sched) {
  if (sched.n_a < 1) throw config_error("schedule: n_a >= 1 required");
  if (!(sched.t_a_us > 0) || sched.t_a_us > 300)
    throw config_error("schedule: anneal time must be in (0, 300] us");
  if (sched.t_p_us < 0) throw config_error("schedule: pause time must be >= 0");
  if (sched.t_p_us > 0 && (sched.s_p < 0.15 || sched.s_p > 0.55))
    throw config_error("schedule: pause position must lie in [0.15, 0.55]");
  if (!(sched.sweeps_per_us > 0)) throw config_error("schedule: sweeps_per_us must be positive");
}

class SampleAccumulator {
 public:
  explicit SampleAccumulator(const IsingProblem& p) : p_(p) {}

  void add(std::vector<int8_t> spins, int count = 1) {
    auto it = index_.find(spins);
    if (it != index_.end()) {
      records_[it->second].count += count;
      return;
    }
    const double energy = ising_energy(p_, spins);
    index_.emplace(spins, records_.size());
    records_.push_back({std::move(spins), energy, count});
  }

  std::vector<SampleRecord> take() { return std::move(records_); }

 private:
  const IsingProblem& p_;
  std::map<std::vector<int8_t>, size_t> index_;
  std::vector<SampleRecord> records_;
};

}  // namespace

SampleSet anneal_run(const IsingProblem& p, const EmbeddedIsing* emb, Backend backend,
                     const AnnealSchedule& sched, const IceModel& ice, Rng& rng) {
  validate_schedule(sched);
  SampleSet out;
  out.backend = backend;
  out.schedule = sched;
  out.seed = rng.seed();
  out.n_anneals = sched.n_a;

  SampleAccumulator acc(p);
  if (backend == Backend::Exact) {
    if (emb != nullptr)
      throw std::invalid_argument("anneal_run: the exact backend solves the logical problem");
    check_exact_size(p.n);
    if (!ice.enabled) {
      acc.add(exact_ground(p), sched.n_a);
    } else {
      for (int a = 0; a < sched.n_a; ++a) {
        Rng sub = rng.fork(a + 1);
        acc.add(exact_ground(apply_ice(p, ice, sub)));
      }
    }
  } else {
    SpinGlass glass = emb ? glass_from_embedded(*emb)
                          : glass_from_logical(p, /*include_zero_couplers=*/ice.enabled);
    for (int a = 0; a < sched.n_a; ++a) {
      Rng sub = rng.fork(a + 1);
      perturb_values(glass, ice, sub);
      const std::vector<double> betas = build_betas(glass, sched);
      std::vector<int8_t> spins = sa_sample(glass, betas, sub);
      if (emb) spins = unembed(spins, *emb, sub);
      acc.add(std::move(spins));
    }
  }
  out.records = acc.take();
  return out;
}

const SampleRecord& best_of_run(const SampleSet& s) {
  if (s.records.empty()) throw std::invalid_argument("best_of_run: empty sample set");
  const SampleRecord* best = &s.records.front();
  for (const auto& r : s.records)
    if (r.energy < best->energy) best = &r;
  return *best;
}

nlohmann::json to_json(const SampleRecord& r) {
  std::vector<int> bits(r.spins.size());
  for (size_t i = 0; i < r.spins.size(); ++i) bits[i] = r.spins[i] > 0 ? 1 : 0;
  return {{"bits", bits}, {"energy", r.energy}, {"count", r.count}};
}

}  // namespace amdet
