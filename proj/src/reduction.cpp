#include "amdet/reduction.hpp"

#include <stdexcept>

#include "amdet/transforms.hpp"

namespace amdet {

namespace {

void check_dims(const CMat& h, const CVec& y) {
  if (h.rows() != y.size())
    throw std::invalid_argument("reduction: y length != receive antenna count");
  if (h.cols() < 1 || h.rows() < h.cols())
    throw std::invalid_argument("reduction: need n_r >= n_t >= 1");
}

// Per-sender linear structure of the solver transform: symbol = base + sum
// coeff_k q_k. Matches solver_symbol() coefficient-for-coefficient.
struct LinearTransform {
  cxd base;
  std::vector<cxd> coeff;  // one per solver bit of this sender
};

LinearTransform linear_transform(const Constellation& c) {
  switch (c.kind()) {
    case Modulation::Bpsk:
      return {cxd(-1, 0), {cxd(2, 0)}};
    case Modulation::Qpsk:
      return {cxd(-1, -1), {cxd(2, 0), cxd(0, 2)}};
    case Modulation::Qam16:
      return {cxd(-3, -3), {cxd(4, 0), cxd(2, 0), cxd(0, 4), cxd(0, 2)}};
  }
  throw std::invalid_argument("bad modulation enum");
}

}  // namespace

QuboProblem ml_to_qubo_oracle(const CMat& h, const CVec& y, const Constellation& c) {
  check_dims(h, y);
  const int n_t = static_cast<int>(h.cols());
  const int q = c.bits_per_symbol();
  const int n = n_t * q;
  const LinearTransform t = linear_transform(c);

  CVec a(n_t);
  CMat b = CMat::Zero(n_t, n);
  for (int s = 0; s < n_t; ++s) {
    a(s) = t.base;
    for (int k = 0; k < q; ++k) b(s, s * q + k) = t.coeff[k];
  }

  const CVec r = y - h * a;
  const CMat m = h * b;
  const CMat gram = m.adjoint() * m;
  const CVec cross = m.adjoint() * r;

  QuboProblem out = QuboProblem::zeros(n);
  out.offset = r.squaredNorm();
  for (int k = 0; k < n; ++k)
    out.diag[k] = gram(k, k).real() - 2.0 * cross(k).real();
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) out.coupling(k, l) = 2.0 * gram(k, l).real();
  return out;
}

IsingProblem ml_to_ising(const CMat& h, const CVec& y, const Constellation& c) {
  check_dims(h, y);
  const int n_t = static_cast<int>(h.cols());
  const int n = n_t * c.bits_per_symbol();

  const RMat hi = h.real();
  const RMat hq = h.imag();
  const RVec yi = y.real();
  const RVec yq = y.imag();

  auto II = [&](int a, int b) { return hi.col(a).dot(hi.col(b)); };
  auto QQ = [&](int a, int b) { return hq.col(a).dot(hq.col(b)); };
  auto IQ = [&](int a, int b) { return hi.col(a).dot(hq.col(b)); };
  auto IyI = [&](int t) { return hi.col(t).dot(yi); };
  auto IyQ = [&](int t) { return hi.col(t).dot(yq); };
  auto QyI = [&](int t) { return hq.col(t).dot(yi); };
  auto QyQ = [&](int t) { return hq.col(t).dot(yq); };

  IsingProblem out = IsingProblem::zeros(n);

  switch (c.kind()) {
    case Modulation::Bpsk: {
      for (int i = 0; i < n; ++i) out.f[i] = -2.0 * IyI(i) - 2.0 * QyQ(i);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          out.coupling(i, j) = 2.0 * II(i, j) + 2.0 * QQ(i, j);
      out.offset = y.squaredNorm();
      for (int t = 0; t < n_t; ++t) out.offset += II(t, t) + QQ(t, t);
      break;
    }
    case Modulation::Qpsk: {
      // Spins pair up per sender: 2t is the in-phase spin, 2t+1 quadrature.
      for (int i = 0; i < n; ++i) {
        const int t = i / 2;
        if (i % 2 == 0)
          out.f[i] = -2.0 * IyI(t) - 2.0 * QyQ(t);
        else
          out.f[i] = -2.0 * IyQ(t) + 2.0 * QyI(t);
      }
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const int ti = i / 2, tj = j / 2;
          if (ti == tj) continue;  // I and Q of one sender never couple
          const bool i_quad = (i % 2 != 0);
          const bool j_quad = (j % 2 != 0);
          if (i_quad == j_quad) {
            out.coupling(i, j) = 2.0 * II(ti, tj) + 2.0 * QQ(ti, tj);
          } else {
            const double sign = i_quad ? +1.0 : -1.0;
            out.coupling(i, j) = sign * 2.0 * IQ(ti, tj) - sign * 2.0 * IQ(tj, ti);
          }
        }
      }
      out.offset = y.squaredNorm();
      for (int t = 0; t < n_t; ++t) out.offset += 2.0 * (II(t, t) + QQ(t, t));
      break;
    }
    case Modulation::Qam16: {
      // Four spins per sender: roles 0..3 = I-high, I-low, Q-high, Q-low,
      // i.e. v = (2 s0 + s1) + j (2 s2 + s3).
      for (int i = 0; i < n; ++i) {
        const int t = i / 4;
        switch (i % 4) {
          case 0: out.f[i] = -4.0 * IyI(t) - 4.0 * QyQ(t); break;
          case 1: out.f[i] = -2.0 * IyI(t) - 2.0 * QyQ(t); break;
          case 2: out.f[i] = -4.0 * IyQ(t) + 4.0 * QyI(t); break;
          case 3: out.f[i] = -2.0 * IyQ(t) + 2.0 * QyI(t); break;
        }
      }
      // Case table over (role_i, role_j). Same-axis pairs couple through the
      // I.I + Q.Q column products; cross-axis pairs through I.Q differences
      // (which cancel identically when ti == tj).
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const int ti = i / 4, tj = j / 4;
          const int ri = i % 4, rj = j % 4;
          const bool i_quad = ri >= 2;
          const bool j_quad = rj >= 2;
          // Amplitude weight: high bit carries 2, low bit carries 1.
          const double wi = (ri % 2 == 0) ? 2.0 : 1.0;
          const double wj = (rj % 2 == 0) ? 2.0 : 1.0;
          const double w = 2.0 * wi * wj;  // 8, 4 or 2
          double val;
          if (i_quad == j_quad)
            val = w * II(ti, tj) + w * QQ(ti, tj);
          else if (!i_quad)
            val = -w * IQ(ti, tj) + w * IQ(tj, ti);
          else
            val = w * IQ(ti, tj) - w * IQ(tj, ti);
          out.coupling(i, j) = val;
        }
      }
      out.offset = y.squaredNorm();
      for (int t = 0; t < n_t; ++t) out.offset += 10.0 * (II(t, t) + QQ(t, t));
      break;
    }
  }
  return out;
}

}  // namespace amdet
