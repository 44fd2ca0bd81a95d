#include "pke/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#if defined(__SIZEOF_FLOAT128__)
#include <quadmath.h>
#endif

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pke {

MetricSample metric_from_key(const Jet2d& theta, double q, double p, double lambda) {
  const double x = theta.base_x(), y = theta.base_y();
  MetricSample s;
  s.coords << q, p, x, y;
  Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
  g(0, 3) = g(3, 0) = 1.0;
  g(1, 2) = g(2, 1) = -1.0;
  g(0, 0) = -2.0 * (theta.partial(2, 0) - lambda / 3.0 * y * y);
  g(0, 1) = g(1, 0) = -2.0 * (theta.partial(1, 1) + lambda / 3.0 * x * y);
  g(1, 1) = -2.0 * (theta.partial(0, 2) - lambda / 3.0 * x * x);
  s.g = g;
  return s;
}

MetricSample metric_example(const Eigen::Vector4d& qpxw, const ModelParams& params) {
  MetricSample s;
  s.coords = qpxw;
  const Eigen::Matrix<long double, 4, 4> g =
      example_metric<long double>(qpxw[2], qpxw[3], params.lambda, params.z0);
  s.g = g.cast<double>();
  return s;
}

MetricEvaluator make_example_evaluator(const ModelParams& params) {
  const long double L = params.lambda, z0 = params.z0;
  return [L, z0](const Vector4ld& c) { return example_metric<long double>(c[2], c[3], L, z0); };
}

#if defined(__SIZEOF_FLOAT128__)
MetricEvaluatorQ make_example_evaluator_q(const ModelParams& params) {
  const Float128 L = params.lambda, z0 = params.z0;
  return [L, z0](const Float128* c, Float128* g) {
    const Float128 x = c[2], w = c[3];
    const Float128 s = Float128(12) * w + L;
    if (!(s > 0) || w == Float128(0) || x == Float128(0) || Float128(2) * w + L == Float128(0))
      throw std::domain_error("example_metric: coordinates at a pole of the chart");
    const Float128 sq = sqrtq(s);
    const Float128 s15 = s * sq;
    const Float128 s35 = s * s * s * sq;
    const Float128 s5 = s * s * s * s * s;
    const Float128 w3 = w * w * w, w4 = w3 * w, w6 = w4 * w * w;
    const Float128 x3 = x * x * x, x4 = x3 * x;
    const Float128 twl = Float128(2) * w + L;
    const Float128 pref = -z0 * s15 / (w4 * x3);
    for (int i = 0; i < 16; ++i) g[i] = Float128(0);
    auto at = [&](int i, int j) -> Float128& { return g[4 * i + j]; };
    at(0, 3) = at(3, 0) = pref * Float128(3) * x * twl;
    at(0, 2) = at(2, 0) = pref * Float128(2) * w * s;
    at(1, 2) = at(2, 1) = Float128(-1);
    at(1, 1) = Float128(-2) * x * x * (Float128(3) * w - L) / twl * (L / Float128(3));
    at(0, 1) = at(1, 0) = -(Float128(2) * z0 / (w3 * x)) * s35 / twl * (L / Float128(3));
    at(0, 0) = Float128(2) * z0 * z0 / (Float128(3) * w6 * x4) * s5 *
               (Float128(36) * w * w + L * L) / twl;
  };
}
#endif

namespace {

template <typename S>
S sabs(S v) {
  return v < S(0) ? -v : v;
}

// Gauss-Jordan inverse of a 4x4, row-major
template <typename S>
void invert4(const S* a_in, S* out) {
  S a[4][8];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      a[i][j] = a_in[4 * i + j];
      a[i][4 + j] = (i == j) ? S(1) : S(0);
    }
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (sabs(a[r][col]) > sabs(a[piv][col])) piv = r;
    if (a[piv][col] == S(0)) throw std::domain_error("curvature: metric not invertible");
    if (piv != col)
      for (int j = 0; j < 8; ++j) std::swap(a[piv][j], a[col][j]);
    const S d = a[col][col];
    for (int j = 0; j < 8; ++j) a[col][j] /= d;
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const S f = a[r][col];
      if (f == S(0)) continue;
      for (int j = 0; j < 8; ++j) a[r][j] -= f * a[col][j];
    }
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[4 * i + j] = a[i][4 + j];
}

// generic evaluator adaptor: writes g row-major into S[16]
template <typename S>
struct ArrayEval {
  std::function<void(const S*, S*)> f;
};

template <typename S>
struct MetricDerivsT {
  S g[16];
  S dg[4][16];
  S d2g[4][4][16];
};

template <typename S>
void metric_derivs_t(const ArrayEval<S>& f, const S p[4], S h, MetricDerivsT<S>& m) {
  S plus[4][16], minus[4][16];
  f.f(p, m.g);
  for (int c = 0; c < 4; ++c) {
    S q[4] = {p[0], p[1], p[2], p[3]};
    q[c] = p[c] + h;
    f.f(q, plus[c]);
    q[c] = p[c] - h;
    f.f(q, minus[c]);
    for (int k = 0; k < 16; ++k) {
      m.dg[c][k] = (plus[c][k] - minus[c][k]) / (S(2) * h);
      m.d2g[c][c][k] = (plus[c][k] - S(2) * m.g[k] + minus[c][k]) / (h * h);
    }
  }
  for (int c = 0; c < 4; ++c)
    for (int d = c + 1; d < 4; ++d) {
      S q[4], gpp[16], gpm[16], gmp[16], gmm[16];
      auto setq = [&](S oc, S od) {
        q[0] = p[0]; q[1] = p[1]; q[2] = p[2]; q[3] = p[3];
        q[c] += oc;
        q[d] += od;
      };
      setq(h, h);
      f.f(q, gpp);
      setq(h, -h);
      f.f(q, gpm);
      setq(-h, h);
      f.f(q, gmp);
      setq(-h, -h);
      f.f(q, gmm);
      for (int k = 0; k < 16; ++k) {
        m.d2g[c][d][k] = (gpp[k] - gpm[k] - gmp[k] + gmm[k]) / (S(4) * h * h);
        m.d2g[d][c][k] = m.d2g[c][d][k];
      }
    }
}

// Ricci assembled from (g, dg, d2g). Sign convention: the para-Kahler
// Einstein backgrounds come out with R = -4 lambda.
template <typename S>
void assemble_ricci_t(const MetricDerivsT<S>& m, S ricci[16], S& scalar) {
  S ginv[16];
  invert4(m.g, ginv);
  S dginv[4][16];
  for (int e = 0; e < 4; ++e) {
    // dginv = -ginv * dg * ginv
    S tmp[16];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        S s = S(0);
        for (int k = 0; k < 4; ++k) s += ginv[4 * i + k] * m.dg[e][4 * k + j];
        tmp[4 * i + j] = s;
      }
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        S s = S(0);
        for (int k = 0; k < 4; ++k) s += tmp[4 * i + k] * ginv[4 * k + j];
        dginv[e][4 * i + j] = -s;
      }
  }

  S gamma[4][4][4];
  S dgamma[4][4][4][4];
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        S s = S(0);
        for (int d = 0; d < 4; ++d)
          s += ginv[4 * a + d] *
               (m.dg[b][4 * d + c] + m.dg[c][4 * d + b] - m.dg[d][4 * b + c]);
        gamma[a][b][c] = s / S(2);
      }
  for (int e = 0; e < 4; ++e)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c) {
          S s = S(0);
          for (int d = 0; d < 4; ++d) {
            s += dginv[e][4 * a + d] *
                 (m.dg[b][4 * d + c] + m.dg[c][4 * d + b] - m.dg[d][4 * b + c]);
            s += ginv[4 * a + d] * (m.d2g[e][b][4 * d + c] + m.d2g[e][c][4 * d + b] -
                                    m.d2g[e][d][4 * b + c]);
          }
          dgamma[e][a][b][c] = s / S(2);
        }

  for (int b = 0; b < 4; ++b)
    for (int c = 0; c < 4; ++c) {
      S s = S(0);
      for (int a = 0; a < 4; ++a) {
        s += dgamma[a][a][b][c] - dgamma[c][a][b][a];
        for (int e = 0; e < 4; ++e)
          s += gamma[a][a][e] * gamma[e][b][c] - gamma[a][c][e] * gamma[e][b][a];
      }
      ricci[4 * b + c] = -s;
    }
  scalar = S(0);
  for (int b = 0; b < 4; ++b)
    for (int c = 0; c < 4; ++c) scalar += ginv[4 * b + c] * ricci[4 * b + c];
}

template <typename S>
struct RicciT {
  S ricci[16];
  S scalar;
  S g[16];
};

template <typename S>
RicciT<S> ricci_fd_t(const ArrayEval<S>& f, const S p[4], S h) {
  MetricDerivsT<S> m;
  metric_derivs_t(f, p, h, m);
  RicciT<S> out;
  for (int k = 0; k < 16; ++k) out.g[k] = m.g[k];
  assemble_ricci_t(m, out.ricci, out.scalar);
  return out;
}

template <typename S>
CurvatureReport curvature_t(const ArrayEval<S>& f, const Eigen::Vector4d& point, double lambda,
                            double base_step, int levels) {
  if (levels < 2) throw std::invalid_argument("curvature: need at least two FD levels");
  S p[4];
  S scale = S(1);
  for (int i = 0; i < 4; ++i) {
    p[i] = S(point[i]);
    if (sabs(p[i]) > scale) scale = sabs(p[i]);
  }
  CurvatureReport rep;
  std::vector<RicciT<S>> lv;
  for (int k = 0; k < levels; ++k) {
    const S h = S(base_step) * scale / S(1 << k);
    lv.push_back(ricci_fd_t(f, p, h));
    rep.level_scalar_defects.push_back(
        static_cast<double>(sabs(lv.back().scalar + S(4) * S(lambda))));
    double lvl_c = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const S c = lv.back().ricci[4 * i + j] -
                    (lv.back().scalar / S(4)) * lv.back().g[4 * i + j];
        lvl_c = std::max(lvl_c, static_cast<double>(sabs(c)));
      }
    rep.level_traceless_ricci.push_back(lvl_c);
    rep.fd_step = static_cast<double>(h);
  }
  // Richardson on the O(h^2) ladder
  S ric[16], sc;
  for (int k = 0; k < 16; ++k)
    ric[k] = (S(4) * lv[levels - 1].ricci[k] - lv[levels - 2].ricci[k]) / S(3);
  sc = (S(4) * lv[levels - 1].scalar - lv[levels - 2].scalar) / S(3);
  rep.richardson_order = 4;
  rep.scalar_defect = static_cast<double>(sabs(sc + S(4) * S(lambda)));
  double maxc = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const S c = ric[4 * i + j] - (sc / S(4)) * lv.back().g[4 * i + j];
      maxc = std::max(maxc, static_cast<double>(sabs(c)));
    }
  rep.max_traceless_ricci = maxc;
  rep.converged = true;
  for (size_t i = 1; i < rep.level_scalar_defects.size(); ++i)
    if (rep.level_scalar_defects[i] > rep.level_scalar_defects[i - 1] &&
        rep.level_scalar_defects[i] > 1e-9)
      rep.converged = false;
  return rep;
}

template <typename S>
double killing_residual_t(const KillingVectorField& K, const ArrayEval<S>& f,
                          const Eigen::Vector4d& point, double base_step) {
  S p[4];
  S scale = S(1);
  for (int i = 0; i < 4; ++i) {
    p[i] = S(point[i]);
    if (sabs(p[i]) > scale) scale = sabs(p[i]);
  }
  Vector4ld pld;
  for (int i = 0; i < 4; ++i) pld[i] = static_cast<long double>(point[i]);
  const Vector4ld Kld = K.components(pld);
  const Matrix4ld Jld = K.jacobian(pld);

  auto lie = [&](S h) {
    S g0[16];
    f.f(p, g0);
    S dg[4][16];
    for (int c = 0; c < 4; ++c) {
      S q[4] = {p[0], p[1], p[2], p[3]}, gp[16], gm[16];
      q[c] = p[c] + h;
      f.f(q, gp);
      q[c] = p[c] - h;
      f.f(q, gm);
      for (int k = 0; k < 16; ++k) dg[c][k] = (gp[k] - gm[k]) / (S(2) * h);
    }
    std::array<S, 16> full{};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        S s = S(0);
        for (int c = 0; c < 4; ++c)
          s += S(Kld[c]) * dg[c][4 * a + b] + g0[4 * c + b] * S(Jld(c, a)) +
               g0[4 * a + c] * S(Jld(c, b));
        full[4 * a + b] = s;
      }
    return full;
  };
  const S h = S(base_step) * scale;
  const auto L1 = lie(h), L2 = lie(h / S(2));
  double worst = 0;
  for (int k = 0; k < 16; ++k) {
    const S ext = (S(4) * L2[k] - L1[k]) / S(3);
    worst = std::max(worst, static_cast<double>(sabs(ext)));
  }
  return worst;
}

ArrayEval<long double> wrap_ld(const MetricEvaluator& g) {
  return {[g](const long double* c, long double* out) {
    Vector4ld v;
    for (int i = 0; i < 4; ++i) v[i] = c[i];
    const Matrix4ld m = g(v);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) out[4 * i + j] = m(i, j);
  }};
}

}  // namespace

RicciData ricci_fd(const MetricEvaluator& g, const Vector4ld& point, double step) {
  const ArrayEval<long double> f = wrap_ld(g);
  long double p[4] = {point[0], point[1], point[2], point[3]};
  const RicciT<long double> r = ricci_fd_t(f, p, static_cast<long double>(step));
  RicciData out;
  out.scalar = r.scalar;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      out.ricci(i, j) = r.ricci[4 * i + j];
      out.g(i, j) = r.g[4 * i + j];
    }
  return out;
}

CurvatureReport curvature(const MetricEvaluator& g, const Eigen::Vector4d& point,
                          double lambda, const FdConfig& cfg) {
  return curvature_t(wrap_ld(g), point, lambda, cfg.base_step, cfg.levels);
}

double killing_residual(const KillingVectorField& K, const MetricEvaluator& g,
                        const Eigen::Vector4d& point, const FdConfig& cfg) {
  return killing_residual_t(K, wrap_ld(g), point, cfg.base_step);
}

#if defined(__SIZEOF_FLOAT128__)
CurvatureReport curvature(const MetricEvaluatorQ& g, const Eigen::Vector4d& point,
                          double lambda, const FdConfig& cfg) {
  const ArrayEval<Float128> f{g};
  return curvature_t(f, point, lambda, cfg.quad_step, cfg.levels);
}

double killing_residual(const KillingVectorField& K, const MetricEvaluatorQ& g,
                        const Eigen::Vector4d& point, const FdConfig& cfg) {
  const ArrayEval<Float128> f{g};
  return killing_residual_t(K, f, point, cfg.quad_step);
}
#endif

KillingVectorField killing_k1() {
  return {[](const Vector4ld&) { return Vector4ld(1, 0, 0, 0); },
          [](const Vector4ld&) { return Matrix4ld::Zero().eval(); }, "K1"};
}

KillingVectorField killing_k2() {
  return {[](const Vector4ld&) { return Vector4ld(0, 1, 0, 0); },
          [](const Vector4ld&) { return Matrix4ld::Zero().eval(); }, "K2"};
}

KillingVectorField killing_k3_hh(const StructureConstants& k) {
  const long double a0 = k.a0, b0 = k.b0, n0 = k.n0, m0 = k.m0;
  Matrix4ld jac = Matrix4ld::Zero();
  // components (a0 p + b0 q, n0 q + m0 p, a0 y - m0 x, n0 x - b0 y)
  jac(0, 0) = b0; jac(0, 1) = a0;
  jac(1, 0) = n0; jac(1, 1) = m0;
  jac(2, 2) = -m0; jac(2, 3) = a0;
  jac(3, 2) = n0; jac(3, 3) = -b0;
  return {[=](const Vector4ld& c) {
            return Vector4ld(a0 * c[1] + b0 * c[0], n0 * c[0] + m0 * c[1],
                             a0 * c[3] - m0 * c[2], n0 * c[2] - b0 * c[3]);
          },
          [jac](const Vector4ld&) { return jac; }, "K3"};
}

KillingVectorField killing_k3_example() {
  Matrix4ld jac = Matrix4ld::Zero();
  jac(0, 0) = 1.0L;
  jac(1, 1) = -0.5L;
  jac(2, 2) = 0.5L;
  return {[](const Vector4ld& c) { return Vector4ld(c[0], -0.5L * c[1], 0.5L * c[2], 0); },
          [jac](const Vector4ld&) { return jac; }, "K3"};
}

Signature metric_signature(const Eigen::Matrix4d& g, double threshold) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(g);
  const auto ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  Signature s;
  for (int i = 0; i < 4; ++i) {
    if (std::abs(ev[i]) < threshold * std::max(1.0, scale))
      throw std::domain_error("metric_signature: near-degenerate eigenvalue " +
                              std::to_string(ev[i]));
    (ev[i] > 0 ? s.positive : s.negative)++;
  }
  return s;
}

bool is_neutral_signature(const Eigen::Matrix4d& g, double threshold) {
  const Signature s = metric_signature(g, threshold);
  return s.positive == 2 && s.negative == 2;
}

std::string metric_sample_json(const MetricSample& s, double scalar_defect,
                               double max_traceless_ricci) {
  std::ostringstream os;
  os.precision(17);
  os << "{\"coords\":[";
  for (int i = 0; i < 4; ++i) os << (i ? "," : "") << s.coords[i];
  os << "],\"g\":[";
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) os << (i + j ? "," : "") << s.g(i, j);
  os << "]";
  if (scalar_defect >= 0) os << ",\"scalar_defect\":" << scalar_defect;
  if (max_traceless_ricci >= 0) os << ",\"max_traceless_ricci\":" << max_traceless_ricci;
  os << "}";
  return os.str();
}

}  // namespace pke
