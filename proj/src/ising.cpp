#include "amdet/ising.hpp"

#include <cmath>
#include <stdexcept>

namespace amdet {

IsingProblem IsingProblem::zeros(int n) {
  IsingProblem p;
  p.n = n;
  p.f.assign(n, 0.0);
  p.g.assign(static_cast<size_t>(n) * (n - 1) / 2, 0.0);
  return p;
}

double IsingProblem::coupling_abs_sum() const {
  double s = 0.0;
  for (double v : g) s += std::abs(v);
  return s;
}

QuboProblem QuboProblem::zeros(int n) {
  QuboProblem p;
  p.n = n;
  p.diag.assign(n, 0.0);
  p.offdiag.assign(static_cast<size_t>(n) * (n - 1) / 2, 0.0);
  return p;
}

double ising_energy(const IsingProblem& p, std::span<const int8_t> spins) {
  if (static_cast<int>(spins.size()) != p.n)
    throw std::invalid_argument("ising_energy: spin vector length != n");
  double e = p.offset;
  for (int i = 0; i < p.n; ++i) e += p.f[i] * spins[i];
  size_t k = 0;
  for (int i = 0; i < p.n; ++i)
    for (int j = i + 1; j < p.n; ++j, ++k) e += p.g[k] * spins[i] * spins[j];
  return e;
}

double qubo_energy(const QuboProblem& p, std::span<const uint8_t> bits) {
  if (static_cast<int>(bits.size()) != p.n)
    throw std::invalid_argument("qubo_energy: bit vector length != n");
  double e = p.offset;
  for (int i = 0; i < p.n; ++i)
    if (bits[i]) e += p.diag[i];
  size_t k = 0;
  for (int i = 0; i < p.n; ++i)
    for (int j = i + 1; j < p.n; ++j, ++k)
      if (bits[i] && bits[j]) e += p.offdiag[k];
  return e;
}

IsingProblem qubo_to_ising(const QuboProblem& p) {
  IsingProblem out = IsingProblem::zeros(p.n);
  out.offset = p.offset;
  for (int i = 0; i < p.n; ++i) {
    out.f[i] += p.diag[i] / 2.0;
    out.offset += p.diag[i] / 2.0;
  }
  size_t k = 0;
  for (int i = 0; i < p.n; ++i)
    for (int j = i + 1; j < p.n; ++j, ++k) {
      const double u = p.offdiag[k];
      out.g[k] = u / 4.0;
      out.f[i] += u / 4.0;
      out.f[j] += u / 4.0;
      out.offset += u / 4.0;
    }
  return out;
}

QuboProblem ising_to_qubo(const IsingProblem& p) {
  QuboProblem out = QuboProblem::zeros(p.n);
  out.offset = p.offset;
  for (int i = 0; i < p.n; ++i) {
    out.diag[i] += 2.0 * p.f[i];
    out.offset -= p.f[i];
  }
  size_t k = 0;
  for (int i = 0; i < p.n; ++i)
    for (int j = i + 1; j < p.n; ++j, ++k) {
      const double gij = p.g[k];
      out.offdiag[k] = 4.0 * gij;
      out.diag[i] -= 2.0 * gij;
      out.diag[j] -= 2.0 * gij;
      out.offset += gij;
    }
  return out;
}

std::vector<int8_t> bits_to_spins(std::span<const uint8_t> bits) {
  std::vector<int8_t> s(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? 1 : -1;
  return s;
}

std::vector<uint8_t> spins_to_bits(std::span<const int8_t> spins) {
  std::vector<uint8_t> b(spins.size());
  for (size_t i = 0; i < spins.size(); ++i) b[i] = spins[i] > 0 ? 1 : 0;
  return b;
}

nlohmann::json to_json(const IsingProblem& p) {
  nlohmann::json g = nlohmann::json::array();
  size_t k = 0;
  for (int i = 0; i < p.n; ++i)
    for (int j = i + 1; j < p.n; ++j, ++k)
      if (p.g[k] != 0.0) g.push_back({i, j, p.g[k]});
  return {{"n", p.n}, {"f", p.f}, {"g", g}, {"offset", p.offset}};
}

nlohmann::json to_json(const QuboProblem& p) {
  nlohmann::json u = nlohmann::json::array();
  size_t k = 0;
  for (int i = 0; i < p.n; ++i)
    for (int j = i + 1; j < p.n; ++j, ++k)
      if (p.offdiag[k] != 0.0) u.push_back({i, j, p.offdiag[k]});
  return {{"n", p.n}, {"diag", p.diag}, {"offdiag", u}, {"offset", p.offset}};
}

IsingProblem ising_from_json(const nlohmann::json& j) {
  IsingProblem p = IsingProblem::zeros(j.at("n").get<int>());
  const auto& f = j.at("f");
  if (static_cast<int>(f.size()) != p.n) throw parse_error("ising dump: |f| != n");
  for (int i = 0; i < p.n; ++i) p.f[i] = f.at(i).get<double>();
  for (const auto& entry : j.at("g")) {
    const int a = entry.at(0).get<int>();
    const int b = entry.at(1).get<int>();
    if (a < 0 || b <= a || b >= p.n) throw parse_error("ising dump: bad coupling index");
    p.coupling(a, b) = entry.at(2).get<double>();
  }
  p.offset = j.value("offset", 0.0);
  return p;
}

}  // namespace amdet
