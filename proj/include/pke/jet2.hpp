#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pke {

/// Bivariate truncated jet of total degree <= 4.
///
/// Stores the value and all partial derivatives d^{i+j} f / dx^i dy^j
/// (i + j <= 4, 15 entries) of a scalar field at a fixed base point.
/// Arithmetic propagates derivatives exactly (Leibniz / Faa di Bruno),
/// so partials extracted from composite expressions are exact up to
/// rounding in the underlying scalar type.
template <typename Scalar = double>
class Jet2 {
 public:
  static constexpr int kOrder = 4;
  using Coeffs = Eigen::Matrix<Scalar, kOrder + 1, kOrder + 1>;

  Jet2() : base_x_(0), base_y_(0), c_(Coeffs::Zero()) {}

  /// Jet of the coordinate function x at (bx, by).
  static Jet2 variable_x(Scalar bx, Scalar by) {
    Jet2 j(bx, by);
    j.c_(0, 0) = bx;
    j.c_(1, 0) = Scalar(1);
    return j;
  }

  /// Jet of the coordinate function y at (bx, by).
  static Jet2 variable_y(Scalar bx, Scalar by) {
    Jet2 j(bx, by);
    j.c_(0, 0) = by;
    j.c_(0, 1) = Scalar(1);
    return j;
  }

  /// Jet of a constant field at (bx, by).
  static Jet2 constant(Scalar value, Scalar bx = Scalar(0), Scalar by = Scalar(0)) {
    Jet2 j(bx, by);
    j.c_(0, 0) = value;
    return j;
  }

  Scalar base_x() const { return base_x_; }
  Scalar base_y() const { return base_y_; }
  Scalar value() const { return c_(0, 0); }

  /// d^{i+j} f / dx^i dy^j at the base point.
  Scalar partial(int i, int j) const {
    if (i < 0 || j < 0 || i + j > kOrder)
      throw std::invalid_argument("Jet2::partial: order " + std::to_string(i) + "," +
                                  std::to_string(j) + " exceeds truncation degree 4");
    return c_(i, j);
  }

  Scalar& coeff_ref(int i, int j) { return c_(i, j); }
  const Coeffs& coeffs() const { return c_; }

  Jet2 operator-() const {
    Jet2 r(base_x_, base_y_);
    r.c_ = -c_;
    return r;
  }

  Jet2 operator+(const Jet2& o) const {
    Jet2 r(base_x_, base_y_);
    r.c_ = c_ + o.c_;
    return r;
  }
  Jet2 operator-(const Jet2& o) const {
    Jet2 r(base_x_, base_y_);
    r.c_ = c_ - o.c_;
    return r;
  }

  /// Leibniz product: (fg)^(i,j) = sum C(i,a) C(j,b) f^(a,b) g^(i-a,j-b).
  Jet2 operator*(const Jet2& o) const {
    Jet2 r(base_x_, base_y_);
    for (int i = 0; i <= kOrder; ++i)
      for (int j = 0; i + j <= kOrder; ++j) {
        Scalar s(0);
        for (int a = 0; a <= i; ++a)
          for (int b = 0; b <= j; ++b)
            s += Scalar(binom(i, a)) * Scalar(binom(j, b)) * c_(a, b) * o.c_(i - a, j - b);
        r.c_(i, j) = s;
      }
    return r;
  }

  /// Division by graded back-substitution; requires o.value() != 0.
  Jet2 operator/(const Jet2& o) const {
    if (o.c_(0, 0) == Scalar(0))
      throw std::domain_error("Jet2 division: denominator jet has zero constant term");
    Jet2 r(base_x_, base_y_);
    for (int d = 0; d <= kOrder; ++d)
      for (int i = d; i >= 0; --i) {
        const int j = d - i;
        Scalar s = c_(i, j);
        for (int a = 0; a <= i; ++a)
          for (int b = 0; b <= j; ++b) {
            if (a == i && b == j) continue;
            s -= Scalar(binom(i, a)) * Scalar(binom(j, b)) * r.c_(a, b) * o.c_(i - a, j - b);
          }
        r.c_(i, j) = s / o.c_(0, 0);
      }
    return r;
  }

  Jet2 operator+(Scalar s) const {
    Jet2 r = *this;
    r.c_(0, 0) += s;
    return r;
  }
  Jet2 operator-(Scalar s) const { return *this + (-s); }
  Jet2 operator*(Scalar s) const {
    Jet2 r(base_x_, base_y_);
    r.c_ = c_ * s;
    return r;
  }
  Jet2 operator/(Scalar s) const { return *this * (Scalar(1) / s); }

  friend Jet2 operator+(Scalar s, const Jet2& j) { return j + s; }
  friend Jet2 operator-(Scalar s, const Jet2& j) { return (-j) + s; }
  friend Jet2 operator*(Scalar s, const Jet2& j) { return j * s; }
  friend Jet2 operator/(Scalar s, const Jet2& j) {
    return Jet2::constant(s, j.base_x_, j.base_y_) / j;
  }

  static int binom(int n, int k) {
    static constexpr int table[5][5] = {
        {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
    return table[n][k];
  }

 private:
  Jet2(Scalar bx, Scalar by) : base_x_(bx), base_y_(by), c_(Coeffs::Zero()) {}

  Scalar base_x_, base_y_;
  Coeffs c_;
};

using Jet2d = Jet2<double>;
using Jet2ld = Jet2<long double>;

/// Faa di Bruno composition g(a) from the derivative table of g at a.value().
///
/// g_table[k] = g^(k)(a.value()), k = 0..4. The caller guarantees domain
/// validity of g; composition itself is exact on the truncated algebra.
template <typename Scalar>
Jet2<Scalar> lift(const std::array<Scalar, 5>& g_table, const Jet2<Scalar>& a) {
  const Jet2<Scalar> u = a - a.value();  // vanishing constant term
  Jet2<Scalar> r = Jet2<Scalar>::constant(g_table[0], a.base_x(), a.base_y());
  Jet2<Scalar> upow = Jet2<Scalar>::constant(Scalar(1), a.base_x(), a.base_y());
  Scalar fact(1);
  for (int k = 1; k <= Jet2<Scalar>::kOrder; ++k) {
    upow = upow * u;
    fact *= Scalar(k);
    r = r + upow * (g_table[k] / fact);
  }
  return r;
}

namespace jet_detail {

template <typename Scalar>
[[noreturn]] void domain_fail(const char* fn, Scalar v) {
  throw std::domain_error(std::string("jet ") + fn + ": argument " +
                          std::to_string(static_cast<double>(v)) + " outside real branch");
}

}  // namespace jet_detail

template <typename Scalar>
Jet2<Scalar> exp(const Jet2<Scalar>& a) {
  using std::exp;
  const Scalar e = exp(a.value());
  return lift<Scalar>({e, e, e, e, e}, a);
}

template <typename Scalar>
Jet2<Scalar> log(const Jet2<Scalar>& a) {
  using std::log;
  const Scalar v = a.value();
  if (!(v > Scalar(0))) jet_detail::domain_fail("log", v);
  const Scalar i1 = Scalar(1) / v, i2 = i1 * i1;
  return lift<Scalar>({log(v), i1, -i2, Scalar(2) * i2 * i1, Scalar(-6) * i2 * i2}, a);
}

template <typename Scalar>
Jet2<Scalar> sqrt(const Jet2<Scalar>& a) {
  using std::sqrt;
  const Scalar v = a.value();
  if (!(v > Scalar(0))) jet_detail::domain_fail("sqrt", v);
  const Scalar s = sqrt(v);
  const Scalar i1 = Scalar(1) / v;
  return lift<Scalar>({s, s * i1 / Scalar(2), -s * i1 * i1 / Scalar(4),
                       Scalar(3) * s * i1 * i1 * i1 / Scalar(8),
                       Scalar(-15) * s * i1 * i1 * i1 * i1 / Scalar(16)},
                      a);
}

/// Real power a^alpha; restricted to a.value() > 0 (no complex branches).
template <typename Scalar>
Jet2<Scalar> pow(const Jet2<Scalar>& a, Scalar alpha) {
  using std::pow;
  const Scalar v = a.value();
  if (!(v > Scalar(0))) jet_detail::domain_fail("pow", v);
  std::array<Scalar, 5> t;
  Scalar coef(1);
  for (int k = 0; k <= 4; ++k) {
    t[k] = coef * pow(v, alpha - Scalar(k));
    coef *= alpha - Scalar(k);
  }
  return lift(t, a);
}

/// Integer power by repeated multiplication (any sign of the base).
template <typename Scalar>
Jet2<Scalar> powi(const Jet2<Scalar>& a, int n) {
  if (n < 0) return Scalar(1) / powi(a, -n);
  Jet2<Scalar> r = Jet2<Scalar>::constant(Scalar(1), a.base_x(), a.base_y());
  for (int k = 0; k < n; ++k) r = r * a;
  return r;
}

template <typename Scalar>
Jet2<Scalar> atan(const Jet2<Scalar>& a) {
  using std::atan;
  const Scalar v = a.value();
  const Scalar d = Scalar(1) + v * v;  // atan' = 1/(1+v^2)
  const Scalar d2 = d * d, d3 = d2 * d, d4 = d3 * d;
  return lift<Scalar>({atan(v), Scalar(1) / d, Scalar(-2) * v / d2,
                       (Scalar(6) * v * v - Scalar(2)) / d3,
                       (Scalar(24) * v - Scalar(24) * v * v * v) / d4},
                      a);
}

}  // namespace pke
