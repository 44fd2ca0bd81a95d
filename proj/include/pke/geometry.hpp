#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

#include "pke/cases.hpp"
#include "pke/jet2.hpp"

namespace pke {

using Vector4ld = Eigen::Matrix<long double, 4, 1>;
using Matrix4ld = Eigen::Matrix<long double, 4, 4>;

/// Metric evaluator over a 4-coordinate chart.
using MetricEvaluator = std::function<Matrix4ld(const Vector4ld&)>;

#if defined(__SIZEOF_FLOAT128__)
using Float128 = __float128;
/// Quadruple-precision evaluator for closed-form metrics (g written row-major).
/// Keeps the finite-difference noise floor orders of magnitude below the
/// Einstein tolerances even where metric entries reach 1e5.
using MetricEvaluatorQ = std::function<void(const Float128*, Float128*)>;
#endif

/// ds^2 metric at a point. The stored g doubles the half-form the catalog
/// works with, so the Einstein conditions read C_ab = 0, R = -4 lambda.
struct MetricSample {
  Eigen::Vector4d coords;  // (q, p, x, y) or (q, p, x, w) on the example chart
  Eigen::Matrix4d g;
};

/// Hyperheavenly-coordinate metric from a key-function jet (order q, p, x, y):
/// ds^2 = 2 dy dq - 2 dx dp - 2(Txx - L/3 y^2) dq^2 - 4(Txy + L/3 xy) dq dp
///        - 2(Tyy - L/3 x^2) dp^2.
MetricSample metric_from_key(const Jet2d& theta, double q, double p, double lambda);

/// Explicit example metric on the (q, p, x, w) chart.
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> example_metric(Scalar x, Scalar w, Scalar lambda, Scalar z0) {
  using std::pow;
  if (!(Scalar(12) * w + lambda > Scalar(0)) || w == Scalar(0) || x == Scalar(0) ||
      Scalar(2) * w + lambda == Scalar(0))
    throw std::domain_error("example_metric: coordinates at a pole of the chart");
  const Scalar s = Scalar(12) * w + lambda;
  const Scalar w4 = w * w * w * w;
  const Scalar pref = -z0 * pow(s, Scalar(1.5)) / (w4 * x * x * x);
  Eigen::Matrix<Scalar, 4, 4> g = Eigen::Matrix<Scalar, 4, 4>::Zero();
  g(0, 3) = g(3, 0) = pref * Scalar(3) * x * (Scalar(2) * w + lambda);  // dw dq
  g(0, 2) = g(2, 0) = pref * Scalar(2) * w * s;                         // dx dq
  g(1, 2) = g(2, 1) = Scalar(-1);
  g(1, 1) = Scalar(-2) * x * x * (Scalar(3) * w - lambda) / (Scalar(2) * w + lambda) *
            (lambda / Scalar(3));
  g(0, 1) = g(1, 0) = -(Scalar(2) * z0 / (w * w * w * x)) * pow(s, Scalar(3.5)) /
                      (Scalar(2) * w + lambda) * (lambda / Scalar(3));
  g(0, 0) = Scalar(2) * z0 * z0 / (Scalar(3) * w4 * w * w * x * x * x * x) * pow(s, Scalar(5)) *
            (Scalar(36) * w * w + lambda * lambda) / (Scalar(2) * w + lambda);
  return g;
}

MetricSample metric_example(const Eigen::Vector4d& qpxw, const ModelParams& params);
MetricEvaluator make_example_evaluator(const ModelParams& params);
#if defined(__SIZEOF_FLOAT128__)
MetricEvaluatorQ make_example_evaluator_q(const ModelParams& params);
#endif

struct FdConfig {
  double base_step = 1e-3;   // scaled by max(1, |coordinate|), long double path
  int levels = 3;            // Richardson ladder depth (>= 2)
  double quad_step = 1e-6;   // step for the quadruple-precision path
};

/// Curvature verification report; values are from the finest converged
/// Richardson level.
struct CurvatureReport {
  double max_traceless_ricci = 0;  // max |C_ab| = |R_ab - (R/4) g_ab|
  double scalar_defect = 0;        // |R + 4 lambda|
  double fd_step = 0;
  int richardson_order = 0;
  bool converged = false;
  std::vector<double> level_scalar_defects;    // raw ladders, diagnostic
  std::vector<double> level_traceless_ricci;
};

/// Ricci data at a point by central differences of the metric, assembled
/// analytically into Christoffels and their derivatives. Curvature sign
/// convention: the para-Kahler Einstein backgrounds satisfy R = -4 lambda.
struct RicciData {
  Matrix4ld ricci;
  long double scalar = 0;
  Matrix4ld g;
};
RicciData ricci_fd(const MetricEvaluator& g, const Vector4ld& point, double step);

CurvatureReport curvature(const MetricEvaluator& g, const Eigen::Vector4d& point,
                          double lambda, const FdConfig& cfg = {});
#if defined(__SIZEOF_FLOAT128__)
CurvatureReport curvature(const MetricEvaluatorQ& g, const Eigen::Vector4d& point,
                          double lambda, const FdConfig& cfg = {});
#endif

/// Killing vector field as closed-form components plus Jacobian.
struct KillingVectorField {
  std::function<Vector4ld(const Vector4ld&)> components;
  std::function<Matrix4ld(const Vector4ld&)> jacobian;
  std::string name;
};

KillingVectorField killing_k1();  // d/dq
KillingVectorField killing_k2();  // d/dp
/// K3 on the hyperheavenly chart (q, p, x, y) from the structure constants.
KillingVectorField killing_k3_hh(const StructureConstants& k);
/// K3 on the example chart (q, p, x, w): q dq - p/2 dp + x/2 dx.
KillingVectorField killing_k3_example();

/// max component of the Lie derivative (L_K g)_ab at the point.
double killing_residual(const KillingVectorField& K, const MetricEvaluator& g,
                        const Eigen::Vector4d& point, const FdConfig& cfg = {});
#if defined(__SIZEOF_FLOAT128__)
double killing_residual(const KillingVectorField& K, const MetricEvaluatorQ& g,
                        const Eigen::Vector4d& point, const FdConfig& cfg = {});
#endif

/// Signature by symmetric eigenvalues; throws when an eigenvalue is within
/// threshold of zero (near-degenerate sample).
struct Signature {
  int positive = 0;
  int negative = 0;
};
Signature metric_signature(const Eigen::Matrix4d& g, double threshold = 1e-10);
bool is_neutral_signature(const Eigen::Matrix4d& g, double threshold = 1e-10);

/// JSON record {coords, g (row-major), residuals...} for CLI export.
std::string metric_sample_json(const MetricSample& s, double scalar_defect = -1,
                               double max_traceless_ricci = -1);

}  // namespace pke
