// pke: batch pipeline driver for the para-Kahler Einstein laboratory.
// Exit codes: 0 = all checks pass, 1 = a verification failed, 2 = usage/schema error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

#include "pke/cases.hpp"
#include "pke/example.hpp"
#include "pke/geometry.hpp"
#include "pke/ode.hpp"
#include "pke/quartic.hpp"
#include "pke/seed_search.hpp"
#include "pke/serialization.hpp"

using nlohmann::json;
using namespace pke;

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t pos = 0;
    out.push_back(std::stod(tok, &pos));
    if (pos != tok.size()) throw std::invalid_argument("malformed number '" + tok + "'");
  }
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file " + path);
  f << content << "\n";
}

json petrov_json(const QuarticCoefficients& q, double eps) {
  const QuarticInvariants inv = invariants(q);
  const PetrovType t = classify_real(q, inv, eps);
  json rec;
  rec["I"] = inv.I;
  rec["J"] = inv.J;
  rec["D"] = inv.D;
  rec["P"] = inv.P;
  rec["R"] = inv.R;
  rec["tag"] = to_string(t.tag);
  rec["margin"] = t.margin;
  try {
    const RootPattern pat = classify_by_roots(q);
    rec["oracle_pattern"] = {{"real_simple", pat.real_simple},
                             {"complex_pairs", pat.complex_pairs},
                             {"infinity_multiplicity", pat.infinity_multiplicity},
                             {"repeated", pat.repeated},
                             {"tag", to_string(tag_from_pattern(pat))}};
  } catch (const std::exception& e) {
    rec["oracle_pattern"] = e.what();
  }
  return rec;
}

ModelParams params_from_flags(double lambda, double m0, double alpha0, double zeta0, double z0,
                              double F0, double G0) {
  ModelParams p;
  p.lambda = lambda;
  p.m0 = m0;
  p.alpha0 = alpha0;
  p.zeta0 = zeta0;
  p.z0 = z0;
  p.F0 = F0;
  p.G0 = G0;
  return p;
}

SeedBox default_box(AlgebraTag tag) {
  if (tag == AlgebraTag::A35Half) return {{0.5, -1.0}, {2.0, 1.0}};
  return {{-1.0, -1.0}, {1.0, 1.0}};
}

// ---------------------------------------------------------------------------
// integrate subcommand
// ---------------------------------------------------------------------------

int run_integrate(const CaseDocument& doc, double tol, const std::string& out_prefix,
                  const std::string& format) {
  const AlgebraTag tag = doc.tag;
  const ModelParams& p = doc.params;

  json summary;
  summary["case"] = to_string(tag);
  summary["lambda"] = p.lambda;

  if (tag == AlgebraTag::A33) {
    // closed form: no integration, just degeneracy samples
    const KeyFunctionField field = key_function(tag, p, nullptr);
    double dmax = 0;
    for (double x = -1.0; x <= 1.0; x += 0.4)
      for (double y = 0.3; y <= 1.5; y += 0.3) {
        const QuarticCoefficients q = weyl_from_theta(field(x, y));
        const QuarticInvariants inv = invariants(q);
        dmax = std::max(dmax, std::abs(inv.D) /
                                  std::max(1.0, discriminant_scale(q, inv)));
      }
    summary["max_scaled_discriminant"] = dmax;
    summary["degenerate"] = dmax < 1e-12;
    write_output(out_prefix.empty() ? "" : out_prefix + "_summary.json", summary.dump(2));
    return dmax < 1e-12 ? 0 : 1;
  }

  SeedCertificate cert;
  if (doc.seed_auto) {
    try {
      cert = find_nondegenerate_seed(tag, p, default_box(tag));
    } catch (const SeedExhausted& e) {
      std::cerr << "seed search failed: " << e.what() << "\n";
      return 1;
    }
  } else {
    cert.reduced = doc.seed;
    reduced_to_ode_state(tag, p, doc.seed, cert.t0, cert.ode_state);
    cert.discriminant = reduced_state_discriminant(tag, p, doc.seed);
    const auto [x0, y0] = canonical_point(tag, p, cert.t0);
    const Jet2d th0 =
        local_theta_jet(tag, p, cert.t0, cert.ode_state[0], cert.ode_state[1], x0, y0);
    const PetrovType t0type = classify_real(weyl_from_theta(th0), 1e-6);
    if (t0type.margin <= 0) {
      json fail;
      fail["seed"] = {doc.seed[0], doc.seed[1]};
      fail["discriminant"] = cert.discriminant;
      fail["margin"] = t0type.margin;
      fail["reason"] = "degenerate seed: discriminant inside the tolerance band";
      std::cerr << "singular seed certificate of failure: " << fail.dump() << "\n";
      return 1;
    }
  }
  summary["seed"] = {{"reduced", {cert.reduced[0], cert.reduced[1]}},
                     {"t0", cert.t0},
                     {"state", {cert.ode_state[0], cert.ode_state[1]}},
                     {"discriminant", cert.discriminant}};

  const double span_lo = doc.has_span ? doc.span_lo : cert.t0;
  const double span_hi = doc.has_span ? doc.span_hi : cert.t0 + 2.0;

  IntegratorConfig cfg;
  cfg.rel_tol = tol;
  cfg.abs_tol = tol * 1e-2;
  cfg.events.push_back({[tag, p](double t, const Eigen::VectorXd& s) {
                          return profile_leading_factor(tag, p, t, s);
                        },
                        true, "leading-factor zero"});
  Eigen::VectorXd s0(2);
  s0 << cert.ode_state[0], cert.ode_state[1];
  const auto traj = std::make_shared<Trajectory>(
      integrate(make_profile_rhs(tag, p), cert.t0, s0, span_hi, cfg));
  if (span_lo < cert.t0) {
    summary["note"] = "span start before the seed anchor is ignored";
  }

  json events = json::array();
  for (const auto& e : traj->events())
    events.push_back({{"t", e.t}, {"event", e.name}, {"terminal", e.terminal}});
  summary["events"] = events;
  summary["status"] = traj->status() == TrajectoryStatus::ReachedEnd ? "reached-end"
                      : traj->status() == TrajectoryStatus::TerminalEvent
                          ? "terminal-event"
                          : "step-size-underflow";
  if (!traj->singularity_report().empty())
    summary["singularity_report"] = traj->singularity_report();

  // residual and dual-route sampling along the validity interval (the stretch
  // before the leading factor collapses)
  const KeyFunctionField field = key_function(tag, p, traj);
  Eigen::VectorXd st0(2);
  st0 << cert.ode_state[0], cert.ode_state[1];
  const double lead0 = std::abs(profile_leading_factor(tag, p, cert.t0, st0));
  double max_residual = 0, max_rel_d = 0;
  int dual_points = 0;
  const int nsamp = 64;
  for (int i = 0; i <= nsamp; ++i) {
    const double t = cert.t0 + (traj->t_end() - cert.t0) * i / nsamp;
    if (!traj->covers(t)) continue;
    if (std::abs(profile_leading_factor(tag, p, t, traj->eval(t))) < 0.05 * lead0) break;
    try {
      const auto [x, y] = canonical_point(tag, p, t);
      const Jet2d th = field(x, y);
      max_residual = std::max(max_residual, std::abs(reduced_hh_residual(th, p.lambda)));
      const Eigen::VectorXd s = traj->eval(t);
      double u = s[0], v = s[1];
      if (tag == AlgebraTag::A34) {  // closed form uses (g, Q)
        u = s[0] / std::pow(t, 4);
        v = s[1] / std::pow(t, 3) - u;
      } else if (tag == AlgebraTag::A36 || tag == AlgebraTag::A37) {
        v = s[1] + 3.0 * s[0];  // Q = gw + 3g
      } else if (tag == AlgebraTag::A35) {
        v = s[1] - 3.0 * s[0] / (1.0 - p.m0);
      } else if (tag == AlgebraTag::A35Half) {
        u = t;       // closed form uses (z, Omega)
        v = s[1];
      }
      const ClosedFormD cf = discriminant_closed_form(tag, p, u, v);
      if (!cf.partial && cf.value != 0.0) {
        const double djet = invariants(weyl_from_theta(th)).D;
        max_rel_d = std::max(max_rel_d, std::abs(djet - cf.value) / std::abs(cf.value));
        ++dual_points;
      }
    } catch (const std::exception&) {
      continue;  // near-singular sample skipped
    }
  }
  summary["max_reduced_hh_residual"] = max_residual;
  summary["dual_route_points"] = dual_points;
  if (dual_points > 0) summary["max_relative_d_mismatch"] = max_rel_d;

  // parallel Abel integration as an independent cross-check of the profile;
  // the comparison span stops where Sigma approaches its own singular zero
  bool abel_ok = true;
  std::string abel_csv;
  try {
    const auto [ta0, sig0] = abel_from_profile(tag, p, cert.t0, s0);
    double ta1 = ta0;
    for (int i = 1; i <= nsamp; ++i) {
      const double t = cert.t0 + (traj->t_end() - cert.t0) * i / nsamp;
      if (!traj->covers(t)) break;
      try {
        const auto [ta, sig] = abel_from_profile(tag, p, t, traj->eval(t));
        if (std::abs(sig) < 0.05 * std::abs(sig0)) break;
        ta1 = ta;
      } catch (const std::exception&) {
        break;
      }
    }
    if (ta1 != ta0) {
      IntegratorConfig acfg;
      acfg.rel_tol = tol;
      acfg.abs_tol = tol * 1e-2;
      Eigen::VectorXd a0(1);
      a0 << sig0;
      const Trajectory abel = integrate(make_abel_rhs(tag, p), ta0, a0, ta1, acfg);
      double max_abel = 0;
      int abel_points = 0;
      for (int i = 0; i <= nsamp; ++i) {
        const double t = cert.t0 + (traj->t_end() - cert.t0) * i / nsamp;
        if (!traj->covers(t)) continue;
        try {
          const auto [ta, sig_expected] = abel_from_profile(tag, p, t, traj->eval(t));
          if (!abel.covers(ta) || std::abs(sig_expected) < 0.05 * std::abs(sig0)) continue;
          const double sig = abel.eval(ta)[0];
          max_abel = std::max(max_abel,
                              std::abs(sig - sig_expected) /
                                  std::max(1.0, std::abs(sig_expected)));
          ++abel_points;
        } catch (const std::exception&) {
          continue;
        }
      }
      summary["abel"] = {{"points", abel_points}, {"max_relative_mismatch", max_abel},
                         {"span", {ta0, ta1}}};
      abel_ok = abel_points == 0 || max_abel < 1e-6;
      abel_csv = trajectory_csv(abel, {"Sigma"});
    } else {
      summary["abel"] = "Sigma = const along the profile";
      Eigen::VectorXd a0(1);
      a0 << sig0;
      // constant column export for the degenerate span
      std::ostringstream os;
      os.precision(17);
      os << "t,Sigma,dSigma\n" << ta0 << "," << sig0 << ",0\n";
      abel_csv = os.str();
    }
  } catch (const std::exception& e) {
    summary["abel"] = std::string("cross-check unavailable: ") + e.what();
  }

  if (format == "csv" || format == "both") {
    const std::vector<std::string> names =
        tag == AlgebraTag::A32   ? std::vector<std::string>{"F", "Fz"}
        : tag == AlgebraTag::A34 ? std::vector<std::string>{"T", "Tv"}
        : tag == AlgebraTag::A35Half ? std::vector<std::string>{"F", "Omega"}
                                     : std::vector<std::string>{"g", "gw"};
    write_output(out_prefix.empty() ? "" : out_prefix + "_trajectory.csv",
                 trajectory_csv(*traj, names));
    if (!abel_csv.empty())
      write_output(out_prefix.empty() ? "" : out_prefix + "_sigma.csv", abel_csv);
  }
  write_output(out_prefix.empty() ? "" : out_prefix + "_summary.json", summary.dump(2));

  const bool ok = max_residual < 1e-8 && (dual_points == 0 || max_rel_d < 1e-6) && abel_ok;
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify-example subcommand
// ---------------------------------------------------------------------------

int run_verify_example(double lambda, double z0, int samples, int points,
                       const std::string& out) {
  ModelParams p;
  p.lambda = lambda;
  p.z0 = z0;
  json rep;
  bool all_pass = true;

  // landmark reproduction vs the reference approximations; roots scale linearly
  // with lambda, so compare per unit lambda in descending order
  const ExampleLandmarks lm = example_landmarks(p);
  const double L = lambda;
  struct Reference {
    double value;
    int decimals;
  };
  auto per_unit_desc = [L](const auto& arr) {
    std::vector<double> v;
    for (double w : arr) v.push_back(w / L);
    std::sort(v.begin(), v.end(), std::greater<double>());
    return v;
  };
  const std::vector<double> vd = per_unit_desc(std::array<double, 2>{lm.wD1, lm.wD2});
  const std::vector<double> vp = per_unit_desc(lm.wP);
  const std::vector<double> vr = per_unit_desc(lm.wR);
  const std::pair<double, Reference> refD[] = {{vd[0], {48.9949, 4}},
                                                 {vd[1], {0.0051, 4}}};
  const std::pair<double, Reference> refP[] = {{vp[0], {4.7017, 4}},
                                                 {vp[1], {0.2714, 4}},
                                                 {vp[2], {-0.07033, 5}},
                                                 {vp[3], {-0.9028, 4}}};
  const std::pair<double, Reference> refR[] = {{vr[0], {3.2990, 4}},
                                                 {vr[1], {0.0065, 4}},
                                                 {vr[2], {-0.0802, 4}},
                                                 {vr[3], {-1.1303, 4}},
                                                 {vr[4], {-5.8537, 4}}};
  json landmarks = json::array();
  auto check_lm = [&](const char* which, double computed, Reference pr) {
    // tolerance: 1e-3 relative, widened to the reference's rounding granularity
    const double tol =
        std::max(1e-3 * std::abs(pr.value), 0.51 * std::pow(10.0, -pr.decimals));
    const bool ok = std::abs(computed - pr.value) <= tol;
    all_pass = all_pass && ok;
    landmarks.push_back({{"which", which},
                         {"computed", computed},
                         {"reference", pr.value},
                         {"tolerance", tol},
                         {"pass", ok}});
  };
  for (const auto& [c, pr] : refD) check_lm("D-root", c, pr);
  for (const auto& [c, pr] : refP) check_lm("P-root", c, pr);
  for (const auto& [c, pr] : refR) check_lm("R-root", c, pr);
  {
    const bool ok = lm.wR_pole == -0.5 * L;
    all_pass = all_pass && ok;
    landmarks.push_back({{"which", "R-pole"}, {"computed", lm.wR_pole / L},
                         {"reference", -0.5}, {"pass", ok}});
  }
  rep["landmarks"] = landmarks;

  // type intervals
  const TypeRangeReport tr = type_ranges(p, samples);
  json intervals = json::array();
  int agreed = 0, total = 0;
  for (const auto& iv : tr.intervals) {
    intervals.push_back({{"lo", iv.lo},
                         {"hi", std::isfinite(iv.hi) ? json(iv.hi) : json("inf")},
                         {"expected", to_string(iv.expected)},
                         {"samples", iv.samples},
                         {"agreed", iv.agreed},
                         {"excluded", iv.excluded},
                         {"unresolved", iv.unresolved}});
    agreed += iv.agreed;
    total += iv.samples;
  }
  const bool types_ok = total > 0 && agreed >= 0.99 * total;
  all_pass = all_pass && types_ok;
  rep["type_intervals"] = intervals;
  rep["type_agreement"] = total > 0 ? static_cast<double>(agreed) / total : 0.0;

  // Einstein + Killing residuals at random valid points
  const MetricEvaluatorQ ev = make_example_evaluator_q(p);
  std::mt19937 rng(20240817u);
  std::uniform_real_distribution<double> uq(-1.0, 1.0);
  std::uniform_real_distribution<double> ux(2.0, 4.0);
  const double wlo = L > 0 ? 1.2 : -L / 12.0 + 1.0;
  std::uniform_real_distribution<double> uw(wlo, wlo + 2.0);
  double max_scalar = 0, max_cab = 0, max_k1 = 0, max_k2 = 0, max_k3 = 0;
  int accepted = 0, excluded = 0;
  json exclusions = json::array();
  while (accepted < points && excluded < 50 * points) {
    const double x = ux(rng) * (uq(rng) > 0 ? 1.0 : -1.0);
    const double w = uw(rng);
    const Eigen::Vector4d pt(uq(rng), uq(rng), x, w);
    const Eigen::Matrix4d g = metric_example(pt, p).g;
    if (std::abs(2.0 * w + L) < 0.1 || g.cwiseAbs().maxCoeff() > 2e5) {
      ++excluded;
      exclusions.push_back({{"w", w}, {"x", x}});
      continue;
    }
    ++accepted;
    const CurvatureReport cr = curvature(ev, pt, L);
    max_scalar = std::max(max_scalar, cr.scalar_defect);
    max_cab = std::max(max_cab, cr.max_traceless_ricci);
    max_k1 = std::max(max_k1, killing_residual(killing_k1(), ev, pt));
    max_k2 = std::max(max_k2, killing_residual(killing_k2(), ev, pt));
    max_k3 = std::max(max_k3, killing_residual(killing_k3_example(), ev, pt));
  }
  const bool einstein_ok = accepted >= points && max_scalar <= 1e-6 && max_cab <= 1e-6;
  const bool killing_ok = std::max({max_k1, max_k2, max_k3}) <= 1e-6;
  all_pass = all_pass && einstein_ok && killing_ok;
  rep["einstein"] = {{"points", accepted},
                     {"excluded", excluded},
                     {"max_scalar_defect", max_scalar},
                     {"max_traceless_ricci", max_cab},
                     {"pass", einstein_ok}};
  rep["killing"] = {{"K1", max_k1}, {"K2", max_k2}, {"K3", max_k3}, {"pass", killing_ok}};
  if (!exclusions.empty()) rep["einstein_exclusions"] = exclusions;
  rep["pass"] = all_pass;

  write_output(out, rep.dump(2));
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// scan subcommand
// ---------------------------------------------------------------------------

struct GridAxis {
  double lo = 0, hi = 0;
  int count = 1;
};

GridAxis parse_axis(const std::string& s) {
  GridAxis a;
  std::stringstream ss(s);
  std::string tok;
  std::vector<std::string> parts;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  if (parts.size() != 3) throw std::invalid_argument("grid axis must be lo:hi:count");
  a.lo = std::stod(parts[0]);
  a.hi = std::stod(parts[1]);
  a.count = std::stoi(parts[2]);
  if (a.count < 1) throw std::invalid_argument("grid count must be >= 1");
  return a;
}

int run_scan(AlgebraTag tag, ModelParams base, const GridAxis& au, const GridAxis& av,
             const std::vector<double>& m0_list, const std::string& out) {
  std::vector<double> m0s = m0_list;
  if (m0s.empty()) m0s.push_back(base.m0);

  struct Point {
    ModelParams p;
    double m0, u, v;
  };
  std::vector<Point> grid;
  for (double m0 : m0s) {
    ModelParams p = base;
    if (tag == AlgebraTag::A35) p.m0 = m0;
    for (int i = 0; i < au.count; ++i)
      for (int j = 0; j < av.count; ++j) {
        const double u = au.count == 1 ? au.lo : au.lo + (au.hi - au.lo) * i / (au.count - 1);
        const double v = av.count == 1 ? av.lo : av.lo + (av.hi - av.lo) * j / (av.count - 1);
        grid.push_back({p, tag == AlgebraTag::A35 ? m0 : 0.0, u, v});
      }
  }

  // grid points are independent; rows are assembled in grid order
  std::vector<std::string> rows(grid.size());
  auto work = [&](size_t begin, size_t end) {
    for (size_t k = begin; k < end; ++k) {
      const Point& pt = grid[k];
      std::ostringstream row;
      row.precision(17);
      row << to_string(tag) << "," << pt.p.lambda << "," << pt.m0 << "," << pt.u << ","
          << pt.v << ",";
      try {
        const ClosedFormD cf = discriminant_closed_form(tag, pt.p, pt.u, pt.v);
        double t0;
        Eigen::Vector2d st;
        reduced_to_ode_state(tag, pt.p, {pt.u, pt.v}, t0, st);
        const auto [x, y] = canonical_point(tag, pt.p, t0);
        const Jet2d th = local_theta_jet(tag, pt.p, t0, st[0], st[1], x, y);
        const PetrovType type = classify_real(weyl_from_theta(th));
        const double djet = invariants(weyl_from_theta(th)).D;
        row << (cf.partial ? djet : cf.value) << "," << (cf.partial ? "1" : "0") << ","
            << to_string(type.tag) << ",ok";
      } catch (const std::exception& e) {
        row << "nan,0,none,failed: " << e.what();
      }
      rows[k] = row.str();
    }
  };
  const size_t nthreads =
      std::min<size_t>(std::max(1u, std::thread::hardware_concurrency()), grid.size());
  std::vector<std::thread> pool;
  const size_t chunk = (grid.size() + nthreads - 1) / std::max<size_t>(nthreads, 1);
  for (size_t t = 0; t < nthreads; ++t) {
    const size_t b = t * chunk, e = std::min(grid.size(), b + chunk);
    if (b < e) pool.emplace_back(work, b, e);
  }
  for (auto& th : pool) th.join();

  std::ostringstream csv;
  csv << "case,lambda,param,u,v,D,partial,tag,status\n";
  for (const auto& r : rows) csv << r << "\n";
  write_output(out, csv.str());
  return 0;
}

int run_scan_example(const ModelParams& p, const GridAxis& aw, double x,
                     const std::string& out) {
  std::ostringstream csv;
  csv.precision(17);
  csv << "case,lambda,z0,w,x,D,P,R,tag,status\n";
  for (int i = 0; i < aw.count; ++i) {
    const double w = aw.count == 1 ? aw.lo : aw.lo + (aw.hi - aw.lo) * i / (aw.count - 1);
    csv << "example," << p.lambda << "," << p.z0 << "," << w << "," << x << ",";
    try {
      const ExampleDPR dpr = example_dpr(w, x, p);
      const Jet2d th = example_theta_jet(x, w, p);
      const PetrovType t = classify_real(weyl_from_theta(th));
      csv << dpr.D << "," << dpr.P << "," << dpr.R << "," << to_string(t.tag) << ",ok\n";
    } catch (const std::exception& e) {
      csv << "nan,nan,nan,none,failed: " << e.what() << "\n";
    }
  }
  write_output(out, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for algebraically general para-Kahler Einstein metrics"};
  app.require_subcommand(1);

  // common parameter flags
  double lambda = 1.0, m0 = 0.5, alpha0 = 1.0, zeta0 = 0.0, z0 = 1.0, F0 = 1.0, G0 = 0.0;
  auto add_params = [&](CLI::App* c) {
    c->add_option("--lambda", lambda, "cosmological constant (nonzero)");
    c->add_option("--m0", m0, "A35 exponent, 0 < |m0| < 1");
    c->add_option("--alpha0", alpha0, "A37 constant, > 0");
    c->add_option("--zeta0", zeta0, "A35Half constant");
    c->add_option("--z0", z0, "example constant (nonzero)");
    c->add_option("--F0", F0, "A33 constant (nonzero)");
    c->add_option("--G0", G0, "A33 constant");
  };

  // classify
  auto* classify = app.add_subcommand("classify", "Petrov type of a Weyl quartic");
  std::string coeffs_str, case_str, state_str, at_str, out_path, format = "json";
  double eps = 1e-9;
  classify->add_option("--coeffs", coeffs_str, "c5,c4,c3,c2,c1");
  classify->add_option("--case", case_str, "algebra tag for a jet-route classification");
  classify->add_option("--state", state_str, "reduced state u,v for --case");
  classify->add_option("--eps", eps, "degeneracy band");
  classify->add_option("--out", out_path, "output path (default stdout)");
  add_params(classify);

  // integrate
  auto* integ = app.add_subcommand("integrate", "profile integration + residual summary");
  std::string icase = "a32", seed_str = "auto", span_str, doc_path, iout, iformat = "both";
  double itol = 1e-12;
  integ->add_option("--case", icase, "algebra tag");
  integ->add_option("--seed", seed_str, "\"auto\" or u,du (reduced variables)");
  integ->add_option("--span", span_str, "a,b integration span");
  integ->add_option("--tol", itol, "integrator relative tolerance");
  integ->add_option("--doc", doc_path, "JSON case document (overrides flags)");
  integ->add_option("--out", iout, "output path prefix");
  integ->add_option("--format", iformat, "csv|json|both");
  add_params(integ);

  // verify-example
  auto* verify = app.add_subcommand("verify-example", "full verification of the explicit metric");
  int vsamples = 500, vpoints = 100;
  std::string vout;
  verify->add_option("--lambda", lambda, "cosmological constant (nonzero)");
  verify->add_option("--z0", z0, "example constant (nonzero)");
  verify->add_option("--samples", vsamples, "type-interval samples per interval");
  verify->add_option("--points", vpoints, "Einstein/Killing sample points");
  verify->add_option("--out", vout, "report path (default stdout)");

  // scan
  auto* scan = app.add_subcommand("scan", "grid scan of discriminants and types");
  std::string scase = "a32", gu = "-1:1:21", gv = "-1:1:21", m0list_str, sout;
  double scan_x = 1.0;
  scan->add_option("--case", scase, "algebra tag or 'example'");
  scan->add_option("--grid-u", gu, "first reduced axis lo:hi:count (w-axis for example)");
  scan->add_option("--grid-v", gv, "second reduced axis lo:hi:count");
  scan->add_option("--m0-list", m0list_str, "comma list of m0 values (A35)");
  scan->add_option("--x", scan_x, "x coordinate for example scans");
  scan->add_option("--out", sout, "output CSV path (default stdout)");
  add_params(scan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const ModelParams p = params_from_flags(lambda, m0, alpha0, zeta0, z0, F0, G0);

    if (classify->parsed()) {
      if (!coeffs_str.empty()) {
        const auto c = parse_list(coeffs_str);
        if (c.size() != 5) {
          std::cerr << "classify: --coeffs needs exactly five numbers\n";
          return 2;
        }
        write_output(out_path, petrov_json({c[0], c[1], c[2], c[3], c[4]}, eps).dump(2));
        return 0;
      }
      if (!case_str.empty()) {
        const AlgebraTag tag = algebra_from_string(case_str);
        validate_params(tag, p);
        if (state_str.empty()) {
          std::cerr << "classify: --case needs --state u,v\n";
          return 2;
        }
        const auto s = parse_list(state_str);
        if (s.size() != 2) {
          std::cerr << "classify: --state needs two numbers\n";
          return 2;
        }
        double t0;
        Eigen::Vector2d st;
        reduced_to_ode_state(tag, p, {s[0], s[1]}, t0, st);
        const auto [x, y] = canonical_point(tag, p, t0);
        const Jet2d th = local_theta_jet(tag, p, t0, st[0], st[1], x, y);
        write_output(out_path, petrov_json(weyl_from_theta(th), eps).dump(2));
        return 0;
      }
      std::cerr << "classify: provide --coeffs or --case/--state\n";
      return 2;
    }

    if (integ->parsed()) {
      CaseDocument doc;
      if (!doc_path.empty()) {
        std::ifstream f(doc_path);
        if (!f) {
          std::cerr << "cannot read case document " << doc_path << "\n";
          return 2;
        }
        std::stringstream ss;
        ss << f.rdbuf();
        doc = parse_case_document(ss.str());
      } else {
        doc.tag = algebra_from_string(icase);
        doc.params = p;
        if (seed_str != "auto") {
          const auto s = parse_list(seed_str);
          if (s.size() != 2) {
            std::cerr << "integrate: --seed needs u,du or \"auto\"\n";
            return 2;
          }
          doc.seed_auto = false;
          doc.seed << s[0], s[1];
        }
        if (!span_str.empty()) {
          const auto s = parse_list(span_str);
          if (s.size() != 2 || s[0] == s[1]) {
            std::cerr << "integrate: --span needs a,b with a != b\n";
            return 2;
          }
          doc.has_span = true;
          doc.span_lo = s[0];
          doc.span_hi = s[1];
        }
        validate_params(doc.tag, doc.params);
      }
      return run_integrate(doc, itol, iout, iformat);
    }

    if (verify->parsed()) {
      if (lambda == 0.0 || z0 == 0.0) {
        std::cerr << "verify-example: lambda and z0 must be nonzero\n";
        return 2;
      }
      return run_verify_example(lambda, z0, vsamples, vpoints, vout);
    }

    if (scan->parsed()) {
      const GridAxis au = parse_axis(gu), av = parse_axis(gv);
      if (scase == "example") return run_scan_example(p, au, scan_x, sout);
      const AlgebraTag tag = algebra_from_string(scase);
      std::vector<double> m0s;
      if (!m0list_str.empty()) {
        m0s = parse_list(m0list_str);
        for (double m : m0s) {
          ModelParams chk = p;
          chk.m0 = m;
          validate_params(tag, chk);  // schema gate before execution
        }
      } else {
        validate_params(tag, p);
      }
      return run_scan(tag, p, au, av, m0s, sout);
    }
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
