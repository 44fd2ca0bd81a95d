#include "pke/cases.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pke/quadrature.hpp"

namespace pke {

namespace {

// real cube root; fractional powers of negative constants in the Abel
// coefficients are read as odd powers under a real cbrt
double rcbrt(double v) { return std::cbrt(v); }

double pow_int(double b, int n) {
  double r = 1.0;
  const double base = n < 0 ? 1.0 / b : b;
  for (int i = 0; i < std::abs(n); ++i) r *= base;
  return r;
}

}  // namespace

std::string to_string(AlgebraTag t) {
  switch (t) {
    case AlgebraTag::A32: return "a32";
    case AlgebraTag::A33: return "a33";
    case AlgebraTag::A34: return "a34";
    case AlgebraTag::A35: return "a35";
    case AlgebraTag::A35Half: return "a35half";
    case AlgebraTag::A36: return "a36";
    case AlgebraTag::A37: return "a37";
  }
  return "?";
}

AlgebraTag algebra_from_string(const std::string& s) {
  if (s == "a32") return AlgebraTag::A32;
  if (s == "a33") return AlgebraTag::A33;
  if (s == "a34") return AlgebraTag::A34;
  if (s == "a35") return AlgebraTag::A35;
  if (s == "a35half") return AlgebraTag::A35Half;
  if (s == "a36") return AlgebraTag::A36;
  if (s == "a37") return AlgebraTag::A37;
  throw std::invalid_argument("unknown algebra tag '" + s + "'");
}

StructureConstants structure_constants(AlgebraTag tag, const ModelParams& p) {
  switch (tag) {
    case AlgebraTag::A32: return {1, 0, 1, 1};
    case AlgebraTag::A33: return {1, 0, 0, 1};
    case AlgebraTag::A34: return {1, 0, 0, -1};
    case AlgebraTag::A35: return {1, 0, 0, p.m0};
    case AlgebraTag::A35Half: return {1, 0, 0, -0.5};
    case AlgebraTag::A36: return {0, -1, 1, 0};
    case AlgebraTag::A37: return {p.alpha0, -1, 1, p.alpha0};
  }
  return {};
}

void validate_params(AlgebraTag tag, const ModelParams& p) {
  if (p.lambda == 0.0) throw std::invalid_argument("lambda must be nonzero");
  switch (tag) {
    case AlgebraTag::A35:
      if (!(std::abs(p.m0) > 0.0 && std::abs(p.m0) < 1.0))
        throw std::invalid_argument("A35 requires 0 < |m0| < 1");
      if (p.m0 == -0.5)
        throw std::invalid_argument("A35 generic branch requires m0 != -1/2 (use a35half)");
      break;
    case AlgebraTag::A37:
      if (!(p.alpha0 > 0.0)) throw std::invalid_argument("A37 requires alpha0 > 0");
      break;
    case AlgebraTag::A33:
      if (p.F0 == 0.0) throw std::invalid_argument("A33 closed form requires F0 != 0");
      break;
    default:
      break;
  }
}

// ---------------------------------------------------------------------------
// profile equations
// ---------------------------------------------------------------------------

OdeRhs make_profile_rhs(AlgebraTag tag, const ModelParams& p) {
  validate_params(tag, p);
  switch (tag) {
    case AlgebraTag::A32:
      return [](double z, const Eigen::VectorXd& s) {
        Eigen::VectorXd d(2);
        d[0] = s[1];
        d[1] = a32_profile_rhs<double>(z, s[0], s[1]);
        return d;
      };
    case AlgebraTag::A34:
      return [](double v, const Eigen::VectorXd& s) {
        Eigen::VectorXd d(2);
        d[0] = s[1];
        d[1] = a34_profile_rhs<double>(v, s[0], s[1]);
        return d;
      };
    case AlgebraTag::A35:
      return [m0 = p.m0](double w, const Eigen::VectorXd& s) {
        Eigen::VectorXd d(2);
        d[0] = s[1];
        d[1] = a35_profile_rhs<double>(m0, w, s[0], s[1]);
        return d;
      };
    case AlgebraTag::A36:
    case AlgebraTag::A37: {
      const double a0 = tag == AlgebraTag::A36 ? 0.0 : p.alpha0;
      return [a0](double w, const Eigen::VectorXd& s) {
        Eigen::VectorXd d(2);
        d[0] = s[1];
        d[1] = a37_profile_rhs<double>(a0, w, s[0], s[1]);
        return d;
      };
    }
    case AlgebraTag::A35Half:
      return [lambda = p.lambda, zeta0 = p.zeta0](double z, const Eigen::VectorXd& s) {
        Eigen::VectorXd d(2);
        d[0] = s[1];  // F' = Omega
        d[1] = a35half_omega_rhs<double>(lambda, zeta0, z, s[1]);
        return d;
      };
    case AlgebraTag::A33:
      throw std::invalid_argument("A33 has a closed-form key function, no profile equation");
  }
  throw std::invalid_argument("make_profile_rhs: bad tag");
}

double profile_leading_factor(AlgebraTag tag, const ModelParams& p, double t,
                              const Eigen::VectorXd& s) {
  switch (tag) {
    case AlgebraTag::A32: return s[1] + 12.0 * s[0] - 1.0;
    case AlgebraTag::A34: return s[1] + t * t * t;
    case AlgebraTag::A35:
      return p.m0 * (p.m0 - 1.0) * s[1] + 2.0 * (p.m0 * p.m0 + 4.0 * p.m0 + 1.0) * s[0] -
             (p.m0 - 1.0) * (p.m0 - 1.0);
    case AlgebraTag::A36: return 1.0 + 4.0 * s[0] + s[1];
    case AlgebraTag::A37:
      return 1.0 + 4.0 * s[0] + s[1] + p.alpha0 * p.alpha0 * (s[1] + 12.0 * s[0]);
    case AlgebraTag::A35Half:
      return 6.0 * t * t * s[1] - 4.0 * p.zeta0 * t + 3.0 * p.lambda * t * t;
    case AlgebraTag::A33: return 1.0;
  }
  return 1.0;
}

namespace {

// second-order cases: truncated-Taylor recurrence for u'', u''', u''''
template <typename F>
std::array<double, 5> taylor_extend2(F&& rhs, double t, double u, double du) {
  const double d2 = rhs(t, u, du);
  const Jet2d T = Jet2d::variable_x(t, 0.0);
  auto build = [&](double v2, double v3) {
    Jet2d U = Jet2d::constant(u, t, 0.0);
    U.coeff_ref(1, 0) = du;
    U.coeff_ref(2, 0) = v2;
    U.coeff_ref(3, 0) = v3;
    Jet2d DU = Jet2d::constant(du, t, 0.0);
    DU.coeff_ref(1, 0) = v2;
    DU.coeff_ref(2, 0) = v3;
    return std::make_pair(U, DU);
  };
  auto [u1, du1] = build(d2, 0.0);
  const double d3 = rhs(T, u1, du1).partial(1, 0);
  auto [u2, du2] = build(d2, d3);
  const double d4 = rhs(T, u2, du2).partial(2, 0);
  return {u, du, d2, d3, d4};
}

}  // namespace

std::array<double, 5> profile_table(AlgebraTag tag, const ModelParams& p, double t, double u,
                                    double du) {
  switch (tag) {
    case AlgebraTag::A32:
      return taylor_extend2([](const auto& z, const auto& f, const auto& fz) {
        return a32_profile_rhs(z, f, fz);
      }, t, u, du);
    case AlgebraTag::A34:
      return taylor_extend2([](const auto& v, const auto& tt, const auto& tv) {
        return a34_profile_rhs(v, tt, tv);
      }, t, u, du);
    case AlgebraTag::A35:
      return taylor_extend2([m0 = p.m0](const auto& w, const auto& g, const auto& gw) {
        return a35_profile_rhs(m0, w, g, gw);
      }, t, u, du);
    case AlgebraTag::A36:
      return taylor_extend2([](const auto& w, const auto& g, const auto& gw) {
        return a37_profile_rhs(0.0, w, g, gw);
      }, t, u, du);
    case AlgebraTag::A37:
      return taylor_extend2([a0 = p.alpha0](const auto& w, const auto& g, const auto& gw) {
        return a37_profile_rhs(a0, w, g, gw);
      }, t, u, du);
    default:
      throw std::invalid_argument("profile_table: tag has no second-order profile");
  }
}

std::array<double, 5> a35half_table(const ModelParams& p, double z, double f, double omega) {
  const double L = p.lambda, ze = p.zeta0;
  const double d1 = a35half_omega_rhs<double>(L, ze, z, omega);
  const Jet2d Zj = Jet2d::variable_x(z, 0.0);
  auto build = [&](double v1, double v2) {
    Jet2d OM = Jet2d::constant(omega, z, 0.0);
    OM.coeff_ref(1, 0) = v1;
    OM.coeff_ref(2, 0) = v2;
    return OM;
  };
  const double d2 = a35half_omega_rhs<Jet2d>(L, ze, Zj, build(d1, 0.0)).partial(1, 0);
  const double d3 = a35half_omega_rhs<Jet2d>(L, ze, Zj, build(d1, d2)).partial(2, 0);
  return {f, omega, d1, d2, d3};  // F and its z-derivatives: F' = Omega
}

// ---------------------------------------------------------------------------
// Abel equations
// ---------------------------------------------------------------------------

double abel_rhs(AlgebraTag tag, const ModelParams& p, double t, double sigma) {
  if (sigma == 0.0) throw std::domain_error("Abel singularity: Sigma = 0");
  switch (tag) {
    case AlgebraTag::A32:
      // Sigma Sigma_w = (10 w + 4/3) Sigma - (1/3) w (12 w + 1)(3 w + 1)
      return 10.0 * t + 4.0 / 3.0 -
             t * (12.0 * t + 1.0) * (3.0 * t + 1.0) / (3.0 * sigma);
    case AlgebraTag::A34:
    case AlgebraTag::A36: {
      if (!(t > 0.0)) throw std::domain_error("Abel branch violation: r must be positive");
      return 1.0 + (0.75 * t + std::pow(2.0, 2.0 / 3.0) * std::pow(t, -1.0 / 3.0)) / sigma;
    }
    case AlgebraTag::A35: {
      if (!(t > 0.0)) throw std::domain_error("Abel branch violation: r must be positive");
      const double c = p.m0 - 1.0;
      const double c16 = rcbrt(pow_int(c, 16));
      const double c5 = rcbrt(pow_int(c, 5));
      const double rhs = 0.75 * t -
                         std::pow(2.0, -2.0 / 3.0) / 3.0 * (p.m0 + 1.0) * (p.m0 + 1.0) * c16 *
                             std::pow(t, -5.0 / 3.0) -
                         std::pow(2.0, 2.0 / 3.0) * p.m0 * c5 * std::pow(t, -1.0 / 3.0);
      return 1.0 + rhs / sigma;
    }
    case AlgebraTag::A35Half: {
      const double L = p.lambda, ze = p.zeta0;
      const double s = 12.0 * t + L;
      if (!(s > 0.0))
        throw std::domain_error("Abel branch violation: 12 w + lambda must be positive");
      const double f1 =
          2.0 * ze * t * (24.0 * t * t - 5.0 * L * L / 3.0) / std::pow(s, 4.5);
      const double f0 = 12.0 * ze * ze * t * t * t * (t + L / 3.0) * (t - L / 3.0) *
                        (6.0 * t + L) / pow_int(s, 8);
      return f1 + f0 / sigma;
    }
    case AlgebraTag::A37: {
      if (!(t > 0.0)) throw std::domain_error("Abel branch violation: r must be positive");
      const double a2 = p.alpha0 * p.alpha0;
      const double rhs = (0.75 * t + std::pow(2.0, 2.0 / 3.0) * std::pow(t, -1.0 / 3.0)) *
                         (1.0 + a2 / 3.0 * std::pow(2.0, 8.0 / 3.0) * std::pow(t, -4.0 / 3.0));
      return 1.0 + rhs / sigma;
    }
    case AlgebraTag::A33:
      throw std::invalid_argument("A33 has no Abel reduction");
  }
  throw std::invalid_argument("abel_rhs: bad tag");
}

OdeRhs make_abel_rhs(AlgebraTag tag, const ModelParams& p) {
  validate_params(tag, p);
  return [tag, p](double t, const Eigen::VectorXd& s) {
    Eigen::VectorXd d(1);
    d[0] = abel_rhs(tag, p, t, s[0]);
    return d;
  };
}

std::pair<double, double> abel_from_profile(AlgebraTag tag, const ModelParams& p, double t,
                                            const Eigen::VectorXd& s) {
  switch (tag) {
    case AlgebraTag::A32: {
      // w = Fz, 3 Sigma = 3 F + 9 w^2 + 4 w
      const double w = s[1];
      return {w, s[0] + 3.0 * w * w + 4.0 * w / 3.0};
    }
    case AlgebraTag::A34: {
      const double g = s[0] / pow_int(t, 4);
      const double Q = s[1] / pow_int(t, 3) - g;
      if (!(Q > 0.0))
        throw std::domain_error("abel_from_profile: r-chart needs Q > 0 (Q = " +
                                std::to_string(Q) + ")");
      const double r = 0.5 / std::pow(Q, 0.75);
      return {r, -2.0 * r * (g + Q + 0.25)};
    }
    case AlgebraTag::A36:
    case AlgebraTag::A37: {
      const double a2 = tag == AlgebraTag::A36 ? 0.0 : p.alpha0 * p.alpha0;
      const double g = s[0];
      const double Q = s[1] + 3.0 * g;  // profile state is (g, gw)
      if (!(Q > 0.0))
        throw std::domain_error("abel_from_profile: r-chart needs Q > 0 (Q = " +
                                std::to_string(Q) + ")");
      const double r = 0.5 / std::pow(Q, 0.75);
      return {r, -2.0 * r * (g * (1.0 + 9.0 * a2) + (1.0 - 3.0 * a2) * Q + 0.25)};
    }
    case AlgebraTag::A35: {
      const double m0 = p.m0;
      const double g = s[0];
      const double Q = s[1] - 3.0 * g / (1.0 - m0);
      if (!(Q > 0.0))
        throw std::domain_error("abel_from_profile: s-chart needs Q > 0 (Q = " +
                                std::to_string(Q) + ")");
      const double s34 = std::pow(Q, 0.75);
      const double r = (m0 - 1.0) * (m0 - 1.0) / (2.0 * s34);
      const double sigma = (g * (m0 + 2.0) * (2.0 * m0 + 1.0) + (1.0 - pow_int(m0, 3)) * Q -
                            0.25 * (m0 - 1.0) * (m0 - 1.0)) /
                           s34;
      return {r, sigma};
    }
    case AlgebraTag::A35Half: {
      // profile is (F, Omega) at z; Abel variable is w = Omega
      const double w = s[1], z = t;
      const double den = 12.0 * w * w + p.lambda * w;
      if (!(12.0 * w + p.lambda > 0.0) || w == 0.0)
        throw std::domain_error("abel_from_profile: w off the (12w + lambda > 0) branch");
      const double B = 2.0 * p.zeta0 * (w + p.lambda / 3.0) / den;
      return {w, (z - B) * pow_int(w, 3) / std::pow(12.0 * w + p.lambda, 2.5)};
    }
    case AlgebraTag::A33:
      throw std::invalid_argument("A33 has no Abel reduction");
  }
  throw std::invalid_argument("abel_from_profile: bad tag");
}

// ---------------------------------------------------------------------------
// tabulated closed-form discriminants
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void pole_report(const char* which, double denom) {
  throw std::domain_error(std::string("pole: ") + which +
                          " vanishes (denominator = " + std::to_string(denom) + ")");
}

double a32_poly1(double F, double w) {
  return 18144 * F * F * w * w + 10368 * F * F * F * w + 1998 * F * F * w +
         1512 * F * F * F - 135 * F * F + 1944 * F * w * w * w * w +
         7668 * F * w * w * w - 225 * F * w * w - 261 * F * w - 810 * pow_int(w, 5) -
         534 * pow_int(w, 4) - 727 * w * w * w - 126 * w * w;
}

double a32_poly2(double F, double w) {
  return -979776 * F * F * pow_int(w, 5) - 1119744 * pow_int(F, 3) * pow_int(w, 4) +
         23112 * F * F * pow_int(w, 4) + 2066688 * pow_int(F, 3) * pow_int(w, 3) -
         460440 * F * F * pow_int(w, 3) + 6531840 * pow_int(F, 4) * w * w -
         1186272 * pow_int(F, 3) * w * w + 45333 * F * F * w * w +
         7464960 * pow_int(F, 5) * w - 1425600 * pow_int(F, 4) * w +
         84348 * pow_int(F, 3) * w - 3294 * F * F * w + 2985984 * pow_int(F, 6) -
         622080 * pow_int(F, 5) + 46980 * pow_int(F, 4) - 2268 * pow_int(F, 3) +
         81 * F * F - 279936 * F * pow_int(w, 6) - 84132 * F * pow_int(w, 5) -
         72672 * F * pow_int(w, 4) + 14898 * F * w * w * w - 144 * F * w * w +
         162 * F * w + 26244 * pow_int(w, 8) + 26568 * pow_int(w, 7) +
         35656 * pow_int(w, 6) + 17480 * pow_int(w, 5) + 7333 * pow_int(w, 4) +
         882 * w * w * w + 81 * w * w;
}

double a34_closed_d(double lambda, double g, double Q) {
  const double den = g + Q + 1.0;
  if (den == 0.0) pole_report("g + Q + 1", den);
  const double f1 = g * (g + 1.0) + 2.0 * (g - 1.0) * Q + Q * Q;
  const double f2 = 2.0 * g * (g + 1.0) * (g + 1.0) + (6.0 * g * g + 2.0 * g - 1.0) * Q +
                    2.0 * (3.0 * g - 1.0) * Q * Q + 2.0 * Q * Q * Q;
  const double f3 = 2.0 * g * pow_int(g + 1.0, 3) +
                    (g + 1.0) * (8.0 * g * g + 10.0 * g - 1.0) * Q +
                    3.0 * (4.0 * g * g + 6.0 * g - 5.0) * Q * Q +
                    2.0 * (4.0 * g + 3.0) * Q * Q * Q + 2.0 * pow_int(Q, 4);
  return 576.0 * pow_int(lambda, 6) * Q * Q / pow_int(den, 16) * f1 * f1 * f2 * f2 * f3 * f3;
}

}  // namespace

ClosedFormD discriminant_closed_form(AlgebraTag tag, const ModelParams& p, double u, double v) {
  switch (tag) {
    case AlgebraTag::A32: {
      const double F = u, w = v;
      const double den = 12.0 * F + w - 1.0;
      if (den == 0.0) pole_report("12 F + w - 1", den);
      const double p1 = a32_poly1(F, w), p2 = a32_poly2(F, w);
      return {64.0 * pow_int(p.lambda, 6) * (3.0 * F + w) * (3.0 * F + w) /
                  pow_int(den, 16) * p1 * p1 * p2,
              false};
    }
    case AlgebraTag::A33:
      return {0.0, false};  // algebraically degenerate for every (F0, G0, lambda)
    case AlgebraTag::A34:
    case AlgebraTag::A36:
      return {a34_closed_d(p.lambda, u, v), false};
    case AlgebraTag::A35: {
      const double m0 = p.m0;
      const double den = u * (m0 + 2.0) * (2.0 * m0 + 1.0) +
                         (m0 - 1.0) * (m0 * (v - 1.0) + 1.0);
      if (den == 0.0) pole_report("g (m0+2)(2m0+1) + (m0-1)(m0(Q-1)+1)", den);
      const double pre = 64.0 * pow_int(p.lambda, 6) * m0 * m0 /
                         (27.0 * pow_int(m0 - 1.0, 12) * pow_int(den, 18));
      return {pre, true};  // the polynomial tail has no tabulated closed form
    }
    case AlgebraTag::A35Half: {
      const double z = u, om = v;
      const double den = -4.0 * p.zeta0 + 3.0 * p.lambda * z + 6.0 * z * om;
      if (den == 0.0) pole_report("-4 zeta0 + 3 lambda z + 6 z Omega", den);
      const double num = p.zeta0 + 3.0 * z * om;
      return {2359296.0 * p.lambda * p.lambda * num * num / pow_int(den, 16), true};
    }
    case AlgebraTag::A37: {
      const double a2 = p.alpha0 * p.alpha0;
      const double den = a2 * (9.0 * u + v) + u + v + 1.0;
      if (den == 0.0) pole_report("alpha0^2 (9g + Q) + g + Q + 1", den);
      return {64.0 * pow_int(p.lambda, 6) / (27.0 * pow_int(den, 18)), true};
    }
  }
  throw std::invalid_argument("discriminant_closed_form: bad tag");
}

// ---------------------------------------------------------------------------
// residuals
// ---------------------------------------------------------------------------

double reduced_hh_residual(const Jet2d& th, double lambda) {
  const double x = th.base_x(), y = th.base_y();
  const double txx = th.partial(2, 0), txy = th.partial(1, 1), tyy = th.partial(0, 2);
  return txx * tyy - txy * txy +
         lambda * (x * th.partial(1, 0) + y * th.partial(0, 1) - th.value() -
                   x * x * txx / 3.0 - y * y * tyy / 3.0 - 2.0 * x * y * txy / 3.0);
}

double master_residual(const StructureConstants& k, const Jet2d& th, double zeta1,
                       double zeta2) {
  const double x = th.base_x(), y = th.base_y();
  return (k.a0 * y - k.m0 * x) * th.partial(1, 0) + (k.n0 * x - k.b0 * y) * th.partial(0, 1) +
         2.0 * (k.b0 + k.m0) * th.value() - zeta1 * x - zeta2 * y;
}

// ---------------------------------------------------------------------------
// key-function fields
// ---------------------------------------------------------------------------

namespace {

void require_covered(const Trajectory& tr, double t, const char* var) {
  if (!tr.covers(t))
    throw std::domain_error(std::string("extrapolation: ") + var + " = " + std::to_string(t) +
                            " outside profile validity [" + std::to_string(tr.t_begin()) +
                            ", " + std::to_string(tr.t_end()) + "]");
}

}  // namespace

double case_map(AlgebraTag tag, const ModelParams& p, double x, double y) {
  switch (tag) {
    case AlgebraTag::A32:
      if (!(y > 0.0)) throw std::domain_error("A32 key function requires y > 0 (ln y)");
      return std::log(y) + x / y;
    case AlgebraTag::A34:
      if (!(x * y > 0.0)) throw std::domain_error("A34 key function requires x y > 0");
      return std::sqrt(x * y);
    case AlgebraTag::A35:
      if (!(y > 0.0)) throw std::domain_error("A35 key function requires y > 0");
      if (!(x > 0.0)) throw std::domain_error("A35 key function requires x > 0 (z > 0)");
      return std::log(std::pow(y, p.m0) / x);
    case AlgebraTag::A35Half:
      return y * x * x;
    case AlgebraTag::A36:
      if (x == 0.0 && y == 0.0)
        throw std::domain_error("A36 key function undefined at the origin");
      return 0.5 * std::log(x * x + y * y);
    case AlgebraTag::A37: {
      if (y == 0.0) throw std::domain_error("A37 key function requires y != 0 (atan(x/y))");
      const double t = std::atan(x / y);
      return 0.5 * std::log((x * x + y * y) * std::exp(2.0 * p.alpha0 * t));
    }
    case AlgebraTag::A33:
      return 0.0;
  }
  throw std::invalid_argument("case_map: bad tag");
}

Jet2d local_theta_jet(AlgebraTag tag, const ModelParams& p, double t, double u, double du,
                      double x, double y) {
  const Jet2d X = Jet2d::variable_x(x, y), Y = Jet2d::variable_y(x, y);
  switch (tag) {
    case AlgebraTag::A32: {
      const auto tb = profile_table(tag, p, t, u, du);
      return (p.lambda / 3.0) * powi(Y, 4) * lift(tb, log(Y) + X / Y);
    }
    case AlgebraTag::A33: {
      const Jet2d inner =
          p.F0 * powi(X + p.G0 * Y, 2) + (p.lambda / (48.0 * p.F0)) * powi(Y, 2);
      return powi(inner, 2);
    }
    case AlgebraTag::A34: {
      const auto tb = profile_table(tag, p, t, u, du);
      return (4.0 * p.lambda / 3.0) * lift(tb, sqrt(X * Y));
    }
    case AlgebraTag::A35: {
      const auto tb = profile_table(tag, p, t, u, du);
      const Jet2d zj = pow(Y, p.m0) / X;
      const Jet2d Fj = (p.lambda / 3.0) * powi(zj, -2) * lift(tb, log(zj));
      return pow(Y, 2.0 + 2.0 * p.m0) * Fj;
    }
    case AlgebraTag::A35Half: {
      const auto tb = a35half_table(p, t, u, du);  // (u, du) = (F, Omega)
      Jet2d theta = Y * lift(tb, Y * X * X);
      if (p.zeta0 != 0.0) {
        if (!(y > 0.0))
          throw std::domain_error("A35Half with zeta0 != 0 requires y > 0 (y ln y)");
        theta = theta + p.zeta0 * Y * log(Y);
      }
      return theta;
    }
    case AlgebraTag::A36: {
      const auto tb = profile_table(tag, p, t, u, du);
      const Jet2d vj = sqrt(X * X + Y * Y);
      return (-p.lambda / 3.0) * powi(vj, 4) * lift(tb, log(vj));
    }
    case AlgebraTag::A37: {
      const auto tb = profile_table(tag, p, t, u, du);
      const Jet2d tj = atan(X / Y);
      const Jet2d vj = sqrt((X * X + Y * Y) * exp(2.0 * p.alpha0 * tj));
      return exp(-4.0 * p.alpha0 * tj) * (-p.lambda / 3.0) * powi(vj, 4) * lift(tb, log(vj));
    }
  }
  throw std::invalid_argument("local_theta_jet: bad tag");
}

std::pair<double, double> canonical_point(AlgebraTag tag, const ModelParams&, double t) {
  switch (tag) {
    case AlgebraTag::A32: return {t, 1.0};                       // z = ln 1 + x/1
    case AlgebraTag::A34: return {t, t};                         // xy = t^2, v = t (t > 0)
    case AlgebraTag::A35: return {std::exp(-t), 1.0};            // z = 1/x = e^t
    case AlgebraTag::A35Half: return {1.0, t};                   // z = y
    case AlgebraTag::A36: {
      const double v = std::exp(t);
      return {v / std::sqrt(2.0), v / std::sqrt(2.0)};
    }
    case AlgebraTag::A37: return {0.0, std::exp(t)};             // atan(0) = 0
    case AlgebraTag::A33: return {1.0, 1.0};
  }
  throw std::invalid_argument("canonical_point: bad tag");
}

KeyFunctionField key_function(AlgebraTag tag, const ModelParams& p,
                              std::shared_ptr<const Trajectory> profile) {
  validate_params(tag, p);
  if (tag != AlgebraTag::A33 && !profile)
    throw std::invalid_argument("key_function: profile trajectory required");

  KeyFunctionField field;
  field.tag = tag;
  field.params = p;
  if (tag == AlgebraTag::A33) {
    field.eval = [p](double x, double y) {
      return local_theta_jet(AlgebraTag::A33, p, 0.0, 0.0, 0.0, x, y);
    };
    return field;
  }
  field.eval = [tag, p, profile](double x, double y) {
    const double t = case_map(tag, p, x, y);
    require_covered(*profile, t,
                    tag == AlgebraTag::A32 || tag == AlgebraTag::A35Half
                        ? "z"
                        : (tag == AlgebraTag::A34 ? "v" : "w"));
    const Eigen::VectorXd s = profile->eval(t);
    return local_theta_jet(tag, p, t, s[0], s[1], x, y);
  };
  return field;
}

// ---------------------------------------------------------------------------
// coordinate relations
// ---------------------------------------------------------------------------

namespace {

double sigma_at(const Trajectory& tr, double t) { return tr.eval(t)[0]; }

void check_no_sigma_zero(const Trajectory& tr, double a, double b) {
  const int n = 128;
  double prev = sigma_at(tr, a);
  for (int i = 1; i <= n; ++i) {
    const double t = a + (b - a) * i / n;
    const double cur = sigma_at(tr, t);
    if (prev == 0.0 || (prev < 0) != (cur < 0))
      throw std::domain_error("coordinate relation: quadrature path crosses Sigma = 0");
    prev = cur;
  }
}

}  // namespace

double coordinate_relation(AlgebraTag tag, const ModelParams& p, const Trajectory& sigma,
                           double t_from, double t_to, double y) {
  if (!sigma.covers(t_from) || !sigma.covers(t_to))
    throw std::domain_error("coordinate relation: endpoints outside stored trajectory");
  if (t_from != t_to) check_no_sigma_zero(sigma, std::min(t_from, t_to), std::max(t_from, t_to));

  switch (tag) {
    case AlgebraTag::A32: {
      if (!(y > 0.0)) throw std::domain_error("A32 coordinate relation requires y > 0");
      const double integral = integrate_gk(
          [&](double w) {
            return (12.0 * w + 1.0) * (3.0 * w + 1.0) / (3.0 * sigma_at(sigma, w));
          },
          t_from, t_to, 1e-10);
      return -y * std::log(y) + y * (4.0 * t_to - integral);
    }
    case AlgebraTag::A34:
    case AlgebraTag::A36: {
      const double integral =
          integrate_gk([&](double r) { return 1.0 / sigma_at(sigma, r); }, t_from, t_to, 1e-10);
      return std::pow(t_to, 2.0 / 3.0) * std::exp(-integral);
    }
    case AlgebraTag::A35: {
      const double m0 = p.m0;
      const double c83 = rcbrt(pow_int(m0 - 1.0, 8));
      const double den0 = (m0 + 2.0) * (2.0 * m0 + 1.0);
      auto integrand = [&](double r) {
        const double Sg = sigma_at(sigma, r);
        const double Sp = abel_rhs(AlgebraTag::A35, p, r, Sg);
        const double s = c83 / (std::pow(2.0, 4.0 / 3.0) * std::pow(r, 4.0 / 3.0));
        const double s_r = -4.0 / 3.0 * s / r;
        const double cc = (m0 - 1.0) * (m0 - 1.0);
        const double g =
            (cc * Sg / (2.0 * r) - (1.0 - pow_int(m0, 3)) * s + 0.25 * cc) / den0;
        const double g_r =
            (cc * (Sp / (2.0 * r) - Sg / (2.0 * r * r)) - (1.0 - pow_int(m0, 3)) * s_r) / den0;
        return g_r / (s + 3.0 * g / (1.0 - m0));
      };
      return std::exp(integrate_gk(integrand, t_from, t_to, 1e-10));
    }
    case AlgebraTag::A37: {
      // integrand constant 2^{8/3}/3 recovered from the reduction chain
      const double a2 = p.alpha0 * p.alpha0;
      const double integral = integrate_gk(
          [&](double r) {
            return (1.0 + std::pow(2.0, 8.0 / 3.0) * a2 / (3.0 * std::pow(r, 4.0 / 3.0))) /
                   sigma_at(sigma, r);
          },
          t_from, t_to, 1e-10);
      return std::pow(t_to, 2.0 / 3.0) * std::exp(-integral);
    }
    default:
      throw std::invalid_argument("coordinate_relation: no closed relation for this tag");
  }
}

}  // namespace pke
