#include "pke/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pke {

namespace {

// Dormand-Prince 5(4) tableau with the Shampine dense-output block.
constexpr double kC[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
constexpr double kB[7] = {35.0 / 384,     0, 500.0 / 1113, 125.0 / 192,
                          -2187.0 / 6784, 11.0 / 84,       0};
constexpr double kE[7] = {71.0 / 57600, 0,         -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
constexpr double kP[7][4] = {
    {1, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0,
     -12715105075.0 / 11282082432.0},
    {0, 0, 0, 0},
    {0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0,
     87487479700.0 / 32700410799.0},
    {0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0,
     -10690763975.0 / 1880347072.0},
    {0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0,
     701980252875.0 / 199316789632.0},
    {0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0, -1453857185.0 / 822651844.0},
    {0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0, 69997945.0 / 29380423.0}};

double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                  const Eigen::VectorXd& y1, double rtol, double atol) {
  double s = 0;
  for (int i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double e = err[i] / sc;
    s += e * e;
  }
  return std::sqrt(s / err.size());
}

double initial_step(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0, double dir,
                    double rtol, double atol, const Eigen::VectorXd& f0) {
  const auto scale = (atol + rtol * y0.cwiseAbs().array()).matrix().eval();
  const double d0 = std::sqrt((y0.array() / scale.array()).square().mean());
  const double d1 = std::sqrt((f0.array() / scale.array()).square().mean());
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  const Eigen::VectorXd y1 = y0 + h0 * dir * f0;
  const Eigen::VectorXd f1 = rhs(t0 + h0 * dir, y1);
  const double d2 = std::sqrt(((f1 - f0).array() / scale.array()).square().mean()) / h0;
  double h1;
  if (d1 <= 1e-15 && d2 <= 1e-15)
    h1 = std::max(1e-6, h0 * 1e-3);
  else
    h1 = std::pow(0.01 / std::max(d1, d2), 0.2);
  return std::min(100 * h0, h1);
}

Eigen::VectorXd dense_at(const Trajectory::Step& s, double t) {
  const double th = (t - s.t0) / s.h;
  Eigen::Vector4d tv(th, th * th, th * th * th, th * th * th * th);
  return s.y0 + s.h * (s.q * tv);
}

Eigen::VectorXd dense_deriv_at(const Trajectory::Step& s, double t) {
  const double th = (t - s.t0) / s.h;
  Eigen::Vector4d tv(1.0, 2 * th, 3 * th * th, 4 * th * th * th);
  return s.q * tv;
}

// bisection of a scalar event on the dense output of one step
double locate_event(const Trajectory::Step& s, const EventFn& ev, double ta, double tb) {
  double fa = ev(ta, dense_at(s, ta));
  for (int it = 0; it < 200; ++it) {
    const double tm = 0.5 * (ta + tb);
    if (std::abs(tb - ta) <= 1e-13 * std::max(1.0, std::abs(tm))) return tm;
    const double fm = ev(tm, dense_at(s, tm));
    if ((fa <= 0 && fm <= 0) || (fa > 0 && fm > 0)) {
      ta = tm;
      fa = fm;
    } else {
      tb = tm;
    }
  }
  return 0.5 * (ta + tb);
}

}  // namespace

bool Trajectory::covers(double t) const {
  const double lo = std::min(t_begin_, t_end_), hi = std::max(t_begin_, t_end_);
  const double slack = 1e-12 * std::max(1.0, hi - lo);
  return t >= lo - slack && t <= hi + slack;
}

const Trajectory::Step& Trajectory::locate(double t) const {
  if (steps_.empty()) throw std::domain_error("Trajectory: empty");
  if (!covers(t))
    throw std::domain_error("Trajectory: t=" + std::to_string(t) + " outside covered span [" +
                            std::to_string(t_begin_) + ", " + std::to_string(t_end_) + "]");
  // steps are ordered in integration direction
  size_t lo = 0, hi = steps_.size() - 1;
  const bool fwd = t_end_ >= t_begin_;
  while (lo < hi) {
    const size_t mid = (lo + hi + 1) / 2;
    const double start = steps_[mid].t0;
    if (fwd ? (t >= start) : (t <= start))
      lo = mid;
    else
      hi = mid - 1;
  }
  return steps_[lo];
}

Eigen::VectorXd Trajectory::eval(double t) const { return dense_at(locate(t), t); }
Eigen::VectorXd Trajectory::eval_derivative(double t) const {
  return dense_deriv_at(locate(t), t);
}

Trajectory integrate(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0, double t_end,
                     const IntegratorConfig& config) {
  if (!(config.rel_tol > 0) || !(config.abs_tol > 0))
    throw std::invalid_argument("integrate: tolerances must be positive");
  if (!(config.max_step > 0)) throw std::invalid_argument("integrate: max_step must be positive");
  if (t_end == t0) throw std::invalid_argument("integrate: degenerate span");

  const int n = static_cast<int>(y0.size());
  const double dir = t_end > t0 ? 1.0 : -1.0;

  Trajectory traj;
  traj.dim_ = n;
  traj.t_begin_ = t0;
  traj.t_end_ = t0;

  Eigen::VectorXd y = y0;
  Eigen::VectorXd f = rhs(t0, y);
  if (!f.allFinite()) throw std::invalid_argument("integrate: rhs not finite at initial state");

  double h = config.first_step > 0
                 ? config.first_step
                 : initial_step(rhs, t0, y, dir, config.rel_tol, config.abs_tol, f);
  h = std::min(h, config.max_step);
  double t = t0;

  std::vector<double> ev_prev(config.events.size());
  for (size_t i = 0; i < config.events.size(); ++i) ev_prev[i] = config.events[i].fn(t, y);

  std::vector<Eigen::VectorXd> k(7, Eigen::VectorXd::Zero(n));
  const double hmin_floor = 1e-14;

  for (long step_count = 0; step_count < config.max_steps; ++step_count) {
    if (t == t_end) break;
    h = std::min(h, std::abs(t_end - t));
    bool accepted = false;
    Eigen::VectorXd y1, f1;
    double err = 0;

    while (!accepted) {
      if (h < hmin_floor * std::max(1.0, std::abs(t))) {
        traj.status_ = TrajectoryStatus::StepSizeUnderflow;
        traj.singularity_report_ =
            "step size underflow at t=" + std::to_string(t) + " (h=" + std::to_string(h) + ")";
        return traj;
      }
      bool finite = true;
      k[0] = f;
      for (int s = 1; s < 7 && finite; ++s) {
        Eigen::VectorXd ys = y;
        for (int j = 0; j < s; ++j)
          if (kA[s][j] != 0) ys += (h * dir * kA[s][j]) * k[j];
        try {
          k[s] = rhs(t + kC[s] * h * dir, ys);
        } catch (const std::exception&) {
          finite = false;
          break;
        }
        if (!k[s].allFinite()) finite = false;
      }
      if (!finite) {
        h *= 0.25;
        continue;
      }
      y1 = y;
      for (int s = 0; s < 7; ++s)
        if (kB[s] != 0) y1 += (h * dir * kB[s]) * k[s];
      Eigen::VectorXd errv = Eigen::VectorXd::Zero(n);
      for (int s = 0; s < 7; ++s)
        if (kE[s] != 0) errv += (h * dir * kE[s]) * k[s];
      err = error_norm(errv, y, y1, config.rel_tol, config.abs_tol);
      if (err <= 1.0) {
        accepted = true;
      } else {
        h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
      }
    }

    // dense block q = K^T * P
    Trajectory::Step st;
    st.t0 = t;
    st.h = h * dir;
    st.y0 = y;
    st.q = Eigen::MatrixXd::Zero(n, 4);
    for (int s = 0; s < 7; ++s)
      for (int c = 0; c < 4; ++c)
        if (kP[s][c] != 0) st.q.col(c) += kP[s][c] * k[s];

    const double t_new = t + h * dir;
    traj.steps_.push_back(st);
    traj.t_end_ = t_new;

    // events on the accepted step
    bool terminal_hit = false;
    double t_cut = t_new;
    try {
      f1 = rhs(t_new, y1);
    } catch (const std::exception&) {
      f1 = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::quiet_NaN());
    }
    for (size_t i = 0; i < config.events.size(); ++i) {
      const double val = config.events[i].fn(t_new, y1);
      if (ev_prev[i] == 0.0 || (ev_prev[i] < 0) != (val < 0) || val == 0.0) {
        const double te = locate_event(traj.steps_.back(), config.events[i].fn,
                                       st.t0, t_new);
        EventRecord rec;
        rec.t = te;
        rec.event_index = static_cast<int>(i);
        rec.name = config.events[i].name;
        rec.terminal = config.events[i].terminal;
        traj.events_.push_back(rec);
        if (config.events[i].terminal && (!terminal_hit || (dir > 0 ? te < t_cut : te > t_cut))) {
          terminal_hit = true;
          t_cut = te;
        }
      }
      ev_prev[i] = val;
    }
    if (terminal_hit) {
      traj.t_end_ = t_cut;
      traj.status_ = TrajectoryStatus::TerminalEvent;
      return traj;
    }

    t = t_new;
    y = y1;
    if (!f1.allFinite()) {
      traj.status_ = TrajectoryStatus::StepSizeUnderflow;
      traj.singularity_report_ = "rhs became non-finite at t=" + std::to_string(t);
      return traj;
    }
    f = f1;  // FSAL
    h = std::min(config.max_step, h * std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2),
                                                 0.2, 10.0));
  }

  if (t != t_end && traj.status_ == TrajectoryStatus::ReachedEnd) {
    traj.status_ = TrajectoryStatus::StepSizeUnderflow;
    traj.singularity_report_ = "max step count reached at t=" + std::to_string(t);
  }
  return traj;
}

std::string trajectory_csv(const Trajectory& traj, const std::vector<std::string>& names) {
  std::ostringstream os;
  os.precision(17);
  const int n = traj.dimension();
  os << "t";
  for (int i = 0; i < n; ++i)
    os << "," << (i < static_cast<int>(names.size()) ? names[i] : "y" + std::to_string(i));
  for (int i = 0; i < n; ++i)
    os << ",d" << (i < static_cast<int>(names.size()) ? names[i] : "y" + std::to_string(i));
  os << "\n";
  auto row = [&](double t) {
    const Eigen::VectorXd y = traj.eval(t);
    const Eigen::VectorXd dy = traj.eval_derivative(t);
    os << t;
    for (int i = 0; i < n; ++i) os << "," << y[i];
    for (int i = 0; i < n; ++i) os << "," << dy[i];
    os << "\n";
  };
  for (const auto& s : traj.steps()) row(s.t0);
  row(traj.t_end());
  return os.str();
}

}  // namespace pke
