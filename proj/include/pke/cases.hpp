#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>

#include "pke/jet2.hpp"
#include "pke/ode.hpp"

namespace pke {

enum class AlgebraTag { A32, A33, A34, A35, A35Half, A36, A37 };

std::string to_string(AlgebraTag t);
AlgebraTag algebra_from_string(const std::string& s);

/// Structure constants of the third Killing vector
/// K3 = a0 (p dq + y dx) + b0 (q dq - y dy) + n0 (q dp + x dy) + m0 (p dp - x dx).
struct StructureConstants {
  double b0 = 0, n0 = 0, a0 = 0, m0 = 0;
};

struct ModelParams {
  double lambda = 1.0;  // cosmological constant, nonzero
  double m0 = 0.5;      // A35 family, 0 < |m0| < 1, m0 != -1/2
  double alpha0 = 1.0;  // A37, > 0
  double zeta0 = 0.0;   // A35Half inhomogeneity
  double z0 = 1.0;      // explicit-example constant, nonzero
  double F0 = 1.0;      // A33 closed form, nonzero
  double G0 = 0.0;      // A33 closed form
};

StructureConstants structure_constants(AlgebraTag tag, const ModelParams& p);
void validate_params(AlgebraTag tag, const ModelParams& p);  // throws std::invalid_argument

// ---------------------------------------------------------------------------
// Reduced profile equations, one per algebra. The templated forms are shared
// between the double-valued integrator path and the jet path that extracts
// higher profile derivatives. Each imposes the vanishing-leading-factor
// precondition and throws std::domain_error naming the factor.
// ---------------------------------------------------------------------------

namespace case_detail {

template <typename T>
double scalar_value(const T& v) {
  if constexpr (std::is_same_v<T, double>)
    return v;
  else
    return static_cast<double>(v.value());
}

template <typename T>
void require_nonzero(const T& denom, const char* factor) {
  if (scalar_value(denom) == 0.0)
    throw std::domain_error(std::string("singular state: vanishing leading factor ") + factor);
}

}  // namespace case_detail

/// A32 profile F(z): Fz Fzz + 12 F Fzz - 9 Fz^2 - Fzz - 4 Fz - 3 F = 0.
template <typename T>
T a32_profile_rhs(const T& /*z*/, const T& f, const T& fz) {
  const T den = fz + 12.0 * f - 1.0;
  case_detail::require_nonzero(den, "Fz + 12 F - 1");
  return (9.0 * fz * fz + 4.0 * fz + 3.0 * f) / den;
}

/// A34 profile T(v): Tv Tvv + v^3 Tvv - 3 v^2 Tv + 3 v T = 0.
template <typename T>
T a34_profile_rhs(const T& v, const T& t, const T& tv) {
  const T den = tv + v * v * v;
  case_detail::require_nonzero(den, "Tv + v^3");
  return (3.0 * v * v * tv - 3.0 * v * t) / den;
}

/// A35 profile g(w), autonomous form of the reduced equation for generic m0.
template <typename T>
T a35_profile_rhs(double m0, const T& /*w*/, const T& g, const T& gw) {
  const T den = m0 * (m0 - 1.0) * gw + 2.0 * (m0 * m0 + 4.0 * m0 + 1.0) * g -
                (m0 - 1.0) * (m0 - 1.0);
  case_detail::require_nonzero(den, "m0(m0-1) gw + 2(m0^2+4m0+1) g - (m0-1)^2");
  return (10.0 * (m0 - 1.0) * g * gw + (4.0 * m0 * m0 + m0 + 4.0) * gw * gw +
          4.0 * (m0 - 1.0) * gw + 12.0 * g * g + 3.0 * g) /
         den;
}

/// A36/A37 profile g(w); alpha0 = 0 reproduces A36 (and the A34 equation).
template <typename T>
T a37_profile_rhs(double alpha0, const T& /*w*/, const T& g, const T& gw) {
  const double a2 = alpha0 * alpha0;
  const T den = 1.0 + 4.0 * g + gw + a2 * (gw + 12.0 * g);
  case_detail::require_nonzero(den, "1 + 4g + gw + alpha0^2 (gw + 12 g)");
  return -(3.0 * g + 48.0 * g * g + 4.0 * gw + 40.0 * g * gw + (7.0 - 9.0 * a2) * gw * gw) /
         den;
}

/// A35Half profile Omega(z), first order:
/// 6 z^2 Om Omz + 12 z Om^2 - 2 zeta0 (Om + 2 z Omz) + L (3 z^2 Omz + z Om - 2/3 zeta0) = 0.
template <typename T>
T a35half_omega_rhs(double lambda, double zeta0, const T& z, const T& om) {
  const T den = 6.0 * z * z * om - 4.0 * zeta0 * z + 3.0 * lambda * z * z;
  case_detail::require_nonzero(den, "6 z^2 Omega - 4 zeta0 z + 3 Lambda z^2");
  return (-12.0 * z * om * om + 2.0 * zeta0 * om - lambda * z * om +
          (2.0 / 3.0) * lambda * zeta0) /
         den;
}

/// State convention of make_profile_rhs per algebra:
///   A32      state (F, Fz),   independent variable z
///   A34      state (T, Tv),   independent variable v
///   A35      state (g, gw),   independent variable w = ln z
///   A36/A37  state (g, gw),   independent variable w = ln v
///   A35Half  state (F, Omega) with F' = Omega, independent variable z
/// A33 has a closed-form key function and no profile equation.
OdeRhs make_profile_rhs(AlgebraTag tag, const ModelParams& p);

/// Leading factor whose zero is the profile equation's singular locus;
/// usable directly as a terminal integration event.
double profile_leading_factor(AlgebraTag tag, const ModelParams& p, double t,
                              const Eigen::VectorXd& state);

/// Profile value and derivatives d^0..d^4 at one point, extending (u, u')
/// through the reduced equation by truncated-Taylor recurrence.
std::array<double, 5> profile_table(AlgebraTag tag, const ModelParams& p, double t, double u,
                                    double du);

/// A35Half table (F, Omega, Omega', Omega'', Omega''') at z.
std::array<double, 5> a35half_table(const ModelParams& p, double z, double f, double omega);

// ---------------------------------------------------------------------------
// Abel equations of the second kind, one per algebra (cross-check route).
// ---------------------------------------------------------------------------

/// Sigma' at (t, Sigma). Throws on Sigma = 0 and on branch violations.
/// Independent variable: w for A32 and A35Half, r > 0 otherwise.
double abel_rhs(AlgebraTag tag, const ModelParams& p, double t, double sigma);
OdeRhs make_abel_rhs(AlgebraTag tag, const ModelParams& p);

/// Image of a profile sample under the case's Abel change of variables,
/// as (abel_variable, Sigma). Throws std::domain_error off the Abel branch
/// (e.g. Q <= 0 where the r-chart needs it positive).
std::pair<double, double> abel_from_profile(AlgebraTag tag, const ModelParams& p, double t,
                                            const Eigen::VectorXd& state);

// ---------------------------------------------------------------------------
// Tabulated closed-form discriminants.
// ---------------------------------------------------------------------------

struct ClosedFormD {
  double value = 0;
  bool partial = false;  // true when only the prefactor has a closed form
};

/// Reduced-variable meaning of (u, v):
///   A32: (F, w = Fz);  A34/A36: (g, Q);  A35: (g, Q);  A37: (g, Q);
///   A35Half: (z, Omega);  A33: ignored (identically zero).
/// Throws std::domain_error("pole: ...") at denominator zeros.
ClosedFormD discriminant_closed_form(AlgebraTag tag, const ModelParams& p, double u, double v);

// ---------------------------------------------------------------------------
// Scalar residuals of the field equations on a jet.
// ---------------------------------------------------------------------------

/// Two-commuting-Killing reduced hyperheavenly equation at the jet's base point.
double reduced_hh_residual(const Jet2d& theta, double lambda);

/// Master symmetry equation (a0 y - m0 x) Tx + (n0 x - b0 y) Ty + 2(b0+m0) T = z1 x + z2 y.
double master_residual(const StructureConstants& k, const Jet2d& theta, double zeta1,
                       double zeta2);

// ---------------------------------------------------------------------------
// Key-function fields: (x, y) -> degree-4 jet of Theta.
// ---------------------------------------------------------------------------

struct KeyFunctionField {
  AlgebraTag tag;
  ModelParams params;
  std::function<Jet2d(double, double)> eval;
  Jet2d operator()(double x, double y) const { return eval(x, y); }
};

/// Builds the case's key function over a profile trajectory produced by
/// make_profile_rhs (A33: closed form, profile ignored and may be null).
KeyFunctionField key_function(AlgebraTag tag, const ModelParams& p,
                              std::shared_ptr<const Trajectory> profile);

/// Theta jet at (x, y) from a pointwise profile state (u, du) at the case's
/// independent variable t. The caller guarantees t is the image of (x, y)
/// under the case's coordinate map.
Jet2d local_theta_jet(AlgebraTag tag, const ModelParams& p, double t, double u, double du,
                      double x, double y);

/// A default hyperheavenly point (x, y) whose case map lands on t.
std::pair<double, double> canonical_point(AlgebraTag tag, const ModelParams& p, double t);

// ---------------------------------------------------------------------------
// Coordinate relations (quadrature over a стored Abel trajectory).
// ---------------------------------------------------------------------------

/// Evaluates the case's coordinate relation with the integral anchored at
/// t_from and evaluated at t_to over the stored Abel trajectory sigma.
///   A32  -> x(w = t_to, y) (requires y > 0)
///   A34  -> x y
///   A35  -> y^{m0} / x
///   A36  -> x^2 + y^2
///   A37  -> (x^2 + y^2) exp(2 alpha0 atan(x/y))
double coordinate_relation(AlgebraTag tag, const ModelParams& p, const Trajectory& sigma,
                           double t_from, double t_to, double y = 1.0);

}  // namespace pke
