#pragma once

#include <Eigen/Core>

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace pke {

using OdeRhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;
using EventFn = std::function<double(double, const Eigen::VectorXd&)>;

struct Event {
  EventFn fn;
  bool terminal = true;
  std::string name;
};

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double first_step = 0;  // 0 = automatic
  long max_steps = 2'000'000;
  std::vector<Event> events;
};

struct EventRecord {
  double t = 0;
  int event_index = -1;
  std::string name;
  bool terminal = false;
};

enum class TrajectoryStatus { ReachedEnd, TerminalEvent, StepSizeUnderflow };

/// Dense-output trajectory of one adaptive Dormand-Prince 5(4) integration.
class Trajectory {
 public:
  struct Step {
    double t0, h;
    Eigen::VectorXd y0;
    Eigen::MatrixXd q;  // n x 4 interpolation block, y = y0 + h*q*[th,th^2,th^3,th^4]
  };

  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }
  int dimension() const { return dim_; }
  TrajectoryStatus status() const { return status_; }
  const std::string& singularity_report() const { return singularity_report_; }
  const std::vector<EventRecord>& events() const { return events_; }
  const std::vector<Step>& steps() const { return steps_; }

  bool covers(double t) const;

  /// Dense state at t (throws std::domain_error outside the covered span).
  Eigen::VectorXd eval(double t) const;
  /// Time derivative of the dense interpolant at t.
  Eigen::VectorXd eval_derivative(double t) const;

 private:
  friend Trajectory integrate(const OdeRhs&, double, const Eigen::VectorXd&, double,
                              const IntegratorConfig&);
  std::vector<Step> steps_;
  std::vector<EventRecord> events_;
  double t_begin_ = 0, t_end_ = 0;
  int dim_ = 0;
  TrajectoryStatus status_ = TrajectoryStatus::ReachedEnd;
  std::string singularity_report_;
  const Step& locate(double t) const;
};

/// Adaptive explicit Dormand-Prince 5(4) with free 4th-order interpolant.
/// Integrates forward or backward; stops at span end, the first terminal
/// event, or step-size underflow (partial trajectory + singularity report).
Trajectory integrate(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0, double t_end,
                     const IntegratorConfig& config = {});

/// Trajectory CSV export: header "t,y0..,dy0.." then one row per mesh node.
std::string trajectory_csv(const Trajectory& traj, const std::vector<std::string>& names = {});

}  // namespace pke
