#include <doctest.h>

#include <cmath>

#include "pke/ode.hpp"

using namespace pke;

namespace {

Eigen::VectorXd vec1(double v) {
  Eigen::VectorXd x(1);
  x << v;
  return x;
}

}  // namespace

TEST_CASE("exponential growth reaches e at the stated tolerance") {
  const OdeRhs rhs = [](double, const Eigen::VectorXd& y) { return y; };
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-12;
  const Trajectory tr = integrate(rhs, 0.0, vec1(1.0), 1.0, cfg);
  CHECK(tr.status() == TrajectoryStatus::ReachedEnd);
  CHECK(tr.eval(1.0)[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
  CHECK(tr.eval(0.5)[0] == doctest::Approx(std::exp(0.5)).epsilon(1e-8));
}

TEST_CASE("observed error scales with tolerance within a factor of 10") {
  const OdeRhs rhs = [](double, const Eigen::VectorXd& y) { return y; };
  auto err_at = [&](double tol) {
    IntegratorConfig cfg;
    cfg.rel_tol = tol;
    cfg.abs_tol = tol * 1e-3;
    const Trajectory tr = integrate(rhs, 0.0, vec1(1.0), 1.0, cfg);
    return std::abs(tr.eval(1.0)[0] - std::exp(1.0));
  };
  const double e6 = err_at(1e-6), e10 = err_at(1e-10);
  const double ratio = e6 / e10;
  CHECK(ratio > 1e3);   // expected ~1e4
  CHECK(ratio < 1e5 * 10);
  CHECK(e6 < 10 * 1e-6 * std::exp(1.0));
}

TEST_CASE("dense output is consistent under halved tolerances") {
  const OdeRhs rhs = [](double t, const Eigen::VectorXd& y) {
    Eigen::VectorXd d(1);
    d[0] = std::cos(t) * y[0];
    return d;
  };
  IntegratorConfig loose, tight;
  loose.rel_tol = 1e-8;
  loose.abs_tol = 1e-10;
  tight.rel_tol = 5e-9;
  tight.abs_tol = 5e-11;
  const Trajectory a = integrate(rhs, 0.0, vec1(1.0), 3.0, loose);
  const Trajectory b = integrate(rhs, 0.0, vec1(1.0), 3.0, tight);
  for (double t = 0.1; t < 3.0; t += 0.17)
    CHECK(a.eval(t)[0] == doctest::Approx(b.eval(t)[0]).epsilon(1e-7));
}

TEST_CASE("interpolant derivative channel is C1-consistent") {
  // second-order system (u, u') for u'' = -u
  const OdeRhs rhs = [](double, const Eigen::VectorXd& y) {
    Eigen::VectorXd d(2);
    d[0] = y[1];
    d[1] = -y[0];
    return d;
  };
  Eigen::VectorXd y0(2);
  y0 << 1.0, 0.0;
  const Trajectory tr = integrate(rhs, 0.0, y0, 6.0);
  for (double t = 0.05; t < 6.0; t += 0.31) {
    const auto y = tr.eval(t);
    const auto dy = tr.eval_derivative(t);
    CHECK(std::abs(dy[0] - y[1]) < 1e-8);  // d(dense u)/dt vs stored u' channel
  }
}

TEST_CASE("event location is bracketed tightly") {
  // y' = -1 from 1: crossing of y at t = 1 exactly
  const OdeRhs rhs = [](double, const Eigen::VectorXd&) { return vec1(-1.0); };
  IntegratorConfig cfg;
  cfg.events.push_back({[](double, const Eigen::VectorXd& y) { return y[0]; }, true, "y=0"});
  const Trajectory tr = integrate(rhs, 0.0, vec1(1.0), 5.0, cfg);
  CHECK(tr.status() == TrajectoryStatus::TerminalEvent);
  REQUIRE(tr.events().size() == 1);
  CHECK(std::abs(tr.events()[0].t - 1.0) < 1e-10);
  CHECK(tr.t_end() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("backward integration works") {
  const OdeRhs rhs = [](double, const Eigen::VectorXd& y) { return y; };
  const Trajectory tr = integrate(rhs, 1.0, vec1(std::exp(1.0)), 0.0);
  CHECK(tr.eval(0.0)[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(tr.eval(0.25)[0] == doctest::Approx(std::exp(0.25)).epsilon(1e-8));
}

TEST_CASE("determinism: identical inputs give identical trajectories") {
  const OdeRhs rhs = [](double t, const Eigen::VectorXd& y) {
    Eigen::VectorXd d(1);
    d[0] = std::sin(3 * t) - 0.2 * y[0];
    return d;
  };
  const Trajectory a = integrate(rhs, 0.0, vec1(0.3), 4.0);
  const Trajectory b = integrate(rhs, 0.0, vec1(0.3), 4.0);
  REQUIRE(a.steps().size() == b.steps().size());
  for (size_t i = 0; i < a.steps().size(); ++i) {
    CHECK(a.steps()[i].t0 == b.steps()[i].t0);
    CHECK(a.steps()[i].y0[0] == b.steps()[i].y0[0]);
  }
}

TEST_CASE("singular approach yields a partial trajectory with a report") {
  // y' = y^2 blows up at t = 1 from y(0) = 1
  const OdeRhs rhs = [](double, const Eigen::VectorXd& y) {
    Eigen::VectorXd d(1);
    d[0] = y[0] * y[0];
    return d;
  };
  const Trajectory tr = integrate(rhs, 0.0, vec1(1.0), 2.0);
  CHECK(tr.status() == TrajectoryStatus::StepSizeUnderflow);
  CHECK_FALSE(tr.singularity_report().empty());
  CHECK(tr.t_end() < 1.01);
  CHECK(tr.t_end() > 0.9);
}

TEST_CASE("degenerate span and bad tolerances are rejected") {
  const OdeRhs rhs = [](double, const Eigen::VectorXd& y) { return y; };
  CHECK_THROWS_AS(integrate(rhs, 1.0, vec1(1.0), 1.0), std::invalid_argument);
  IntegratorConfig cfg;
  cfg.rel_tol = -1;
  CHECK_THROWS_AS(integrate(rhs, 0.0, vec1(1.0), 1.0, cfg), std::invalid_argument);
}

TEST_CASE("csv export has mesh, state and derivative columns") {
  const OdeRhs rhs = [](double, const Eigen::VectorXd& y) { return y; };
  const Trajectory tr = integrate(rhs, 0.0, vec1(1.0), 0.5);
  const std::string csv = trajectory_csv(tr, {"u"});
  CHECK(csv.rfind("t,u,du", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') >= 3);
}
