#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace pke {

/// Adaptive Gauss-Kronrod 7(15) quadrature to an absolute tolerance.
/// Bisects until |K15 - G7| <= tol on each panel; throws on excessive depth.
inline double integrate_gk(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-10, int max_depth = 48) {
  static const double xk[8] = {0.0,
                               0.207784955007898468,
                               0.405845151377397167,
                               0.586087235467691130,
                               0.741531185599394440,
                               0.864864423359769073,
                               0.949107912342758525,
                               0.991455371120812639};
  static const double wk[8] = {0.209482141084727828, 0.204432940075298892,
                               0.190350578064785410, 0.169004726639267903,
                               0.140653259715525919, 0.104790010322250184,
                               0.063092092629978553, 0.022935322010529225};
  static const double wg[4] = {0.417959183673469388, 0.381830050505118945,
                               0.279705391489276668, 0.129484966168869693};

  struct Panel {
    static void eval(const std::function<double(double)>& f, double a, double b, double& k15,
                     double& g7) {
      const double c = 0.5 * (a + b), h = 0.5 * (b - a);
      const double f0 = f(c);
      k15 = wk[0] * f0;
      g7 = wg[0] * f0;
      for (int i = 1; i < 8; ++i) {
        const double fp = f(c + h * xk[i]);
        const double fm = f(c - h * xk[i]);
        k15 += wk[i] * (fp + fm);
        if (i % 2 == 0) g7 += wg[i / 2] * (fp + fm);
      }
      k15 *= h;
      g7 *= h;
    }
  };

  std::function<double(double, double, double, int)> rec = [&](double lo, double hi, double tol,
                                                               int depth) -> double {
    double k15, g7;
    Panel::eval(f, lo, hi, k15, g7);
    // relative floor keeps refinement finite when the integrand is large
    if (std::abs(k15 - g7) <= tol + 1e-14 * std::abs(k15) ||
        hi - lo < 1e-14 * std::max(1.0, std::abs(lo)))
      return k15;
    if (depth >= max_depth)
      throw std::runtime_error("integrate_gk: refinement depth exceeded near [" +
                               std::to_string(lo) + ", " + std::to_string(hi) + "]");
    const double mid = 0.5 * (lo + hi);
    return rec(lo, mid, 0.5 * tol, depth + 1) + rec(mid, hi, 0.5 * tol, depth + 1);
  };

  if (a == b) return 0.0;
  const double sign = a < b ? 1.0 : -1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  return sign * rec(lo, hi, abs_tol, 0);
}

}  // namespace pke
