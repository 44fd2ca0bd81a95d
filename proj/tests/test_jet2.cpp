#include <doctest.h>

#include <cmath>
#include <random>

#include "pke/jet2.hpp"

using pke::Jet2d;
using pke::lift;

namespace {

// central finite difference with one Richardson halving
double fd1(const std::function<double(double, double)>& f, double x, double y, bool along_x,
           double h) {
  auto d = [&](double hh) {
    return along_x ? (f(x + hh, y) - f(x - hh, y)) / (2 * hh)
                   : (f(x, y + hh) - f(x, y - hh)) / (2 * hh);
  };
  return (4.0 * d(h / 2) - d(h)) / 3.0;
}

double fd2(const std::function<double(double, double)>& f, double x, double y, bool along_x,
           double h) {
  auto d = [&](double hh) {
    return along_x ? (f(x + hh, y) - 2 * f(x, y) + f(x - hh, y)) / (hh * hh)
                   : (f(x, y + hh) - 2 * f(x, y) + f(x, y - hh)) / (hh * hh);
  };
  return (4.0 * d(h / 2) - d(h)) / 3.0;
}

}  // namespace

TEST_CASE("seeds") {
  const Jet2d x = Jet2d::variable_x(2, 3);
  CHECK(x.partial(0, 0) == 2.0);
  CHECK(x.partial(1, 0) == 1.0);
  CHECK(x.partial(0, 1) == 0.0);
  CHECK(x.partial(2, 0) == 0.0);

  const Jet2d y = Jet2d::variable_y(2, 3);
  CHECK(y.partial(0, 0) == 3.0);
  CHECK(y.partial(0, 1) == 1.0);
  CHECK(y.partial(1, 0) == 0.0);

  const Jet2d c = Jet2d::constant(7.0);
  CHECK(c.partial(0, 0) == 7.0);
  CHECK(c.partial(1, 1) == 0.0);

  CHECK_THROWS_AS((void)x.partial(3, 2), std::invalid_argument);
}

TEST_CASE("products follow the Leibniz rule on monomials") {
  const Jet2d x = Jet2d::variable_x(2, 3), y = Jet2d::variable_y(2, 3);
  const Jet2d xy = x * y;
  CHECK(xy.partial(1, 1) == 1.0);
  CHECK(xy.partial(0, 0) == 6.0);
  CHECK(xy.partial(2, 0) == 0.0);

  const Jet2d x2 = Jet2d::variable_x(1, 0) * Jet2d::variable_x(1, 0);
  CHECK(x2.partial(2, 0) == 2.0);

  // x^2 y^2: all partials analytic
  const Jet2d m = x * x * y * y;
  CHECK(m.partial(2, 2) == 4.0);
  CHECK(m.partial(1, 1) == 4.0 * 2 * 3);
  CHECK(m.partial(2, 0) == 2.0 * 9);
  CHECK(m.partial(0, 2) == 2.0 * 4);
  CHECK(m.partial(2, 1) == 4.0 * 3);
  CHECK(m.partial(1, 2) == 4.0 * 2);
  CHECK(m.partial(0, 0) == 36.0);
}

TEST_CASE("polynomial exactness across all monomials of degree <= 4") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> pts(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double bx = pts(rng), by = pts(rng);
    const Jet2d x = Jet2d::variable_x(bx, by), y = Jet2d::variable_y(bx, by);
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; a + b <= 4; ++b) {
        const Jet2d mono = pke::powi(x, a) * pke::powi(y, b);
        for (int i = 0; i <= 4; ++i)
          for (int j = 0; i + j <= 4; ++j) {
            // analytic partial of x^a y^b
            double expect = 1.0;
            if (i > a || j > b) {
              expect = 0.0;
            } else {
              for (int k = 0; k < i; ++k) expect *= (a - k);
              for (int k = 0; k < j; ++k) expect *= (b - k);
              expect *= std::pow(bx, a - i) * std::pow(by, b - j);
            }
            CHECK(mono.partial(i, j) == doctest::Approx(expect).epsilon(1e-13));
          }
      }
  }
}

TEST_CASE("division recovers quotients and hits the documented example") {
  // 1/y at (0,2): d^4/dy^4 (1/y) = 24/y^5 = 0.75
  const Jet2d y = Jet2d::variable_y(0, 2);
  const Jet2d r = 1.0 / y;
  CHECK(r.partial(0, 4) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(r.partial(0, 0) == doctest::Approx(0.5));
  CHECK(r.partial(0, 1) == doctest::Approx(-0.25));

  const Jet2d zero_const = Jet2d::constant(0.0, 0, 2);
  CHECK_THROWS_AS((void)(y / zero_const), std::domain_error);
}

TEST_CASE("(a*b)/b recovers a; algebra laws") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double bx = u(rng), by = u(rng);
    auto randjet = [&](bool safe_const) {
      Jet2d j = Jet2d::constant(safe_const ? 1.0 + std::abs(u(rng)) : u(rng), bx, by);
      for (int i = 0; i <= 4; ++i)
        for (int k = 0; i + k <= 4; ++k)
          if (i + k > 0) j.coeff_ref(i, k) = u(rng);
      return j;
    };
    const Jet2d a = randjet(false), b = randjet(true), c = randjet(false);

    const Jet2d ab = a * b, ba = b * a;
    const Jet2d abc1 = (a * b) * c, abc2 = a * (b * c);
    const Jet2d rec = (a * b) / b;
    for (int i = 0; i <= 4; ++i)
      for (int k = 0; i + k <= 4; ++k) {
        CHECK(ab.partial(i, k) == doctest::Approx(ba.partial(i, k)).epsilon(1e-14));
        CHECK(abc1.partial(i, k) == doctest::Approx(abc2.partial(i, k)).epsilon(1e-12));
        CHECK(rec.partial(i, k) == doctest::Approx(a.partial(i, k)).epsilon(1e-12));
      }
    const Jet2d s1 = a + b, s2 = b + a;
    for (int i = 0; i <= 4; ++i)
      for (int k = 0; i + k <= 4; ++k) CHECK(s1.partial(i, k) == s2.partial(i, k));
  }
}

TEST_CASE("lift: exp, ln, atan reference values") {
  // exp(x+y) at origin: every partial equals 1
  const Jet2d s = Jet2d::variable_x(0, 0) + Jet2d::variable_y(0, 0);
  const Jet2d e = pke::exp(s);
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j) CHECK(e.partial(i, j) == doctest::Approx(1.0).epsilon(1e-14));

  // ln at x=1: derivatives 1, -1, 2, -6
  const Jet2d l = pke::log(Jet2d::variable_x(1, 0));
  CHECK(l.partial(1, 0) == doctest::Approx(1.0));
  CHECK(l.partial(2, 0) == doctest::Approx(-1.0));
  CHECK(l.partial(3, 0) == doctest::Approx(2.0));
  CHECK(l.partial(4, 0) == doctest::Approx(-6.0));

  // atan(x/y) at (1,1): d/dx = y/(x^2+y^2) = 1/2
  const Jet2d q = Jet2d::variable_x(1, 1) / Jet2d::variable_y(1, 1);
  const Jet2d a = pke::atan(q);
  CHECK(a.partial(1, 0) == doctest::Approx(0.5).epsilon(1e-14));

  // exp(x*y) partials at (1,2) against closed forms
  const Jet2d exy = pke::exp(Jet2d::variable_x(1, 2) * Jet2d::variable_y(1, 2));
  const double e2 = std::exp(2.0);
  CHECK(exy.partial(1, 0) == doctest::Approx(2 * e2).epsilon(1e-13));
  CHECK(exy.partial(2, 0) == doctest::Approx(4 * e2).epsilon(1e-13));
  CHECK(exy.partial(2, 2) == doctest::Approx(14 * e2).epsilon(1e-13));
  CHECK(exy.partial(1, 3) == doctest::Approx(5 * e2).epsilon(1e-13));
  CHECK(exy.partial(0, 4) == doctest::Approx(e2).epsilon(1e-13));
}

TEST_CASE("domain guards on branches") {
  CHECK_THROWS_AS((void)pke::log(Jet2d::variable_x(-1, 0)), std::domain_error);
  CHECK_THROWS_AS((void)pke::sqrt(Jet2d::variable_x(-1, 0)), std::domain_error);
  CHECK_THROWS_AS((void)pke::pow(Jet2d::variable_x(-2, 0), 1.0 / 3.0), std::domain_error);
}

TEST_CASE("transcendental partials agree with finite differences to 1e-7") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  auto f = [](double x, double y) {
    return std::exp(-0.3 * std::atan(x / y)) * std::pow(x * x + y * y, 1.25) +
           std::log(y) * std::sqrt(x);
  };
  for (int trial = 0; trial < 25; ++trial) {
    const double x = u(rng), y = u(rng);
    const Jet2d X = Jet2d::variable_x(x, y), Y = Jet2d::variable_y(x, y);
    const Jet2d j = pke::exp(-0.3 * pke::atan(X / Y)) * pke::pow(X * X + Y * Y, 1.25) +
                    pke::log(Y) * pke::sqrt(X);
    const double h = 1e-4 * std::max(1.0, std::abs(x));
    const double scale = std::abs(j.value()) + 1.0;
    CHECK(std::abs(j.partial(1, 0) - fd1(f, x, y, true, h)) / scale < 1e-7);
    CHECK(std::abs(j.partial(0, 1) - fd1(f, x, y, false, h)) / scale < 1e-7);
    CHECK(std::abs(j.partial(2, 0) - fd2(f, x, y, true, 1e-3)) / scale < 1e-7);
    CHECK(std::abs(j.partial(0, 2) - fd2(f, x, y, false, 1e-3)) / scale < 1e-7);
  }
}
