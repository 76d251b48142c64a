#include "amdet/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "amdet/channel.hpp"

namespace amdet {

namespace {

void check_dims(const CMat& h, const CVec& y) {
  if (h.rows() != y.size()) throw std::invalid_argument("decoder: y length != receive antennas");
  if (h.cols() < 1 || h.rows() < h.cols())
    throw std::invalid_argument("decoder: need n_r >= n_t >= 1");
}

}  // namespace

std::vector<uint8_t> brute_force_ml(const CMat& h, const CVec& y, const Constellation& c) {
  check_dims(h, y);
  const int n_t = static_cast<int>(h.cols());
  const int q = c.bits_per_symbol();
  const int n_bits = n_t * q;
  if (n_bits > 20)
    throw capacity_error("brute_force_ml: search space 2^" + std::to_string(n_bits) +
                         " exceeds the 2^20 cap");

  const uint64_t total = uint64_t{1} << n_bits;
  std::vector<uint8_t> bits(n_bits), best_bits;
  CVec v(n_t), diff(h.rows());
  double best = std::numeric_limits<double>::infinity();
  for (uint64_t idx = 0; idx < total; ++idx) {
    for (int b = 0; b < n_bits; ++b) bits[b] = (idx >> (n_bits - 1 - b)) & 1u;
    for (int s = 0; s < n_t; ++s)
      v(s) = c.map_bits(std::span<const uint8_t>(bits.data() + s * q, q));
    diff.noalias() = y - h * v;
    const double metric = diff.squaredNorm();
    if (metric < best) {  // lexicographic tie-break: first hit wins
      best = metric;
      best_bits = bits;
    }
  }
  return best_bits;
}

std::vector<uint8_t> zero_forcing(const CMat& h, const CVec& y, const Constellation& c) {
  check_dims(h, y);
  Eigen::CompleteOrthogonalDecomposition<CMat> cod(h);
  if (cod.rank() < h.cols()) throw decode_error("zero_forcing: rank-deficient channel");
  const CVec x = cod.solve(y);
  std::vector<uint8_t> bits;
  bits.reserve(h.cols() * c.bits_per_symbol());
  for (int s = 0; s < h.cols(); ++s) {
    const std::vector<uint8_t> sym_bits = c.demap_symbol(c.slice(x(s)));
    bits.insert(bits.end(), sym_bits.begin(), sym_bits.end());
  }
  return bits;
}

namespace {

struct SphereSearch {
  const CMat& r;
  const CVec& ybar;
  std::span<const cxd> symbols;
  int n_t;

  double radius = std::numeric_limits<double>::infinity();
  long long visited = 0;
  std::vector<int> current;
  std::vector<int> best;

  void descend(int level, double partial) {
    cxd b = ybar(level);
    for (int j = level + 1; j < n_t; ++j) b -= r(level, j) * symbols[current[j]];
    const double rll = r(level, level).real();  // diagonal normalized real-positive
    const cxd center = b / rll;

    // Enumerate children nearest-first so the first radius violation prunes
    // the rest of the level.
    struct Child { double dist; int sym; };
    std::vector<Child> order(symbols.size());
    for (size_t k = 0; k < symbols.size(); ++k)
      order[k] = {std::norm(symbols[k] - center), static_cast<int>(k)};
    std::sort(order.begin(), order.end(), [](const Child& a, const Child& b) {
      return a.dist < b.dist;
    });

    for (const Child& child : order) {
      ++visited;
      const double metric = partial + rll * rll * child.dist;
      if (metric >= radius) break;
      current[level] = child.sym;
      if (level == 0) {
        radius = metric;
        best = current;
      } else {
        descend(level - 1, metric);
      }
    }
  }
};

}  // namespace

std::pair<std::vector<uint8_t>, SphereStats> sphere_decode(const CMat& h, const CVec& y,
                                                           const Constellation& c) {
  check_dims(h, y);
  const int n_t = static_cast<int>(h.cols());

  Eigen::HouseholderQR<CMat> qr(h);
  CMat r = qr.matrixQR().topRows(n_t).triangularView<Eigen::Upper>();
  CVec ybar = (qr.householderQ().adjoint() * y).head(n_t);

  // Rotate each row so the diagonal is real and positive, and reject
  // rank-deficient channels.
  double max_diag = 0.0;
  for (int i = 0; i < n_t; ++i) max_diag = std::max(max_diag, std::abs(r(i, i)));
  for (int i = 0; i < n_t; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag <= 1e-12 * std::max(1.0, max_diag))
      throw decode_error("sphere_decode: rank-deficient channel");
    const cxd phase = std::conj(r(i, i) / mag);
    r.row(i) *= phase;
    ybar(i) *= phase;
  }

  SphereSearch search{r,  ybar, c.symbols(), n_t, std::numeric_limits<double>::infinity(),
                      0,  std::vector<int>(n_t, 0), {}};
  search.descend(n_t - 1, 0.0);

  std::vector<uint8_t> bits;
  bits.reserve(n_t * c.bits_per_symbol());
  for (int s = 0; s < n_t; ++s) {
    const std::vector<uint8_t> sym_bits = c.demap_symbol(c.symbols()[search.best[s]]);
    bits.insert(bits.end(), sym_bits.begin(), sym_bits.end());
  }
  SphereStats stats;
  stats.visited = search.visited;
  stats.final_radius = search.radius;
  stats.metric = search.radius;
  return {bits, stats};
}

}  // namespace amdet
