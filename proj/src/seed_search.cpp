#include "pke/seed_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pke/quartic.hpp"

namespace pke {

void reduced_to_ode_state(AlgebraTag tag, const ModelParams& p, const Eigen::Vector2d& r,
                          double& t0, Eigen::Vector2d& state) {
  switch (tag) {
    case AlgebraTag::A32:
      t0 = 0.0;
      state << r[0], r[1];  // (F, Fz)
      return;
    case AlgebraTag::A34: {
      const double v0 = 1.0;
      t0 = v0;
      state << r[0] * v0 * v0 * v0 * v0, (r[1] + r[0]) * v0 * v0 * v0;  // T, Tv from (g, Q)
      return;
    }
    case AlgebraTag::A35:
      t0 = 0.0;
      state << r[0], r[1] + 3.0 * r[0] / (1.0 - p.m0);  // gw = Q + 3g/(1-m0)
      return;
    case AlgebraTag::A36:
    case AlgebraTag::A37:
      t0 = 0.0;
      state << r[0], r[1] - 3.0 * r[0];  // gw = Q - 3g
      return;
    case AlgebraTag::A35Half:
      t0 = r[0];           // reduced state is (z, Omega)
      state << 0.0, r[1];  // F anchored at 0
      return;
    case AlgebraTag::A33:
      throw std::invalid_argument("A33 needs no seed (closed form)");
  }
  throw std::invalid_argument("reduced_to_ode_state: bad tag");
}

double reduced_state_discriminant(AlgebraTag tag, const ModelParams& p,
                                  const Eigen::Vector2d& r) {
  double t0;
  Eigen::Vector2d s;
  reduced_to_ode_state(tag, p, r, t0, s);
  const auto [x, y] = canonical_point(tag, p, t0);
  const Jet2d theta = local_theta_jet(tag, p, t0, s[0], s[1], x, y);
  return invariants(weyl_from_theta(theta)).D;
}

namespace {

struct Probe {
  bool regular = false;
  double d = 0;         // jet-route discriminant
  double scale = 0;     // cancellation scale of D
  double lead = 0;      // profile leading factor
};

Probe probe_state(AlgebraTag tag, const ModelParams& p, const Eigen::Vector2d& r) {
  Probe out;
  double t0;
  Eigen::Vector2d s;
  reduced_to_ode_state(tag, p, r, t0, s);
  Eigen::VectorXd sv(2);
  sv << s[0], s[1];
  out.lead = profile_leading_factor(tag, p, t0, sv);
  if (std::abs(out.lead) <= 0.02 * (1.0 + r.cwiseAbs().maxCoeff())) return out;
  try {
    const auto [x, y] = canonical_point(tag, p, t0);
    const QuarticCoefficients q =
        weyl_from_theta(local_theta_jet(tag, p, t0, s[0], s[1], x, y));
    const QuarticInvariants inv = invariants(q);
    out.d = inv.D;
    out.scale = discriminant_scale(q, inv);
    out.regular = std::isfinite(out.d) && std::isfinite(out.scale);
  } catch (const std::exception&) {
    out.regular = false;
  }
  return out;
}

constexpr double kBand = 1e-6;  // non-degeneracy band |D| > kBand * scale

}  // namespace

SeedCertificate find_nondegenerate_seed(AlgebraTag tag, const ModelParams& p,
                                        const SeedBox& box, int samples_per_axis,
                                        double margin) {
  validate_params(tag, p);
  if (samples_per_axis < 3)
    throw std::invalid_argument("find_nondegenerate_seed: need at least 3 samples per axis");

  const int n = samples_per_axis;
  auto grid_point = [&](double fi, double fj) {
    return Eigen::Vector2d(box.lo[0] + (box.hi[0] - box.lo[0]) * fi,
                           box.lo[1] + (box.hi[1] - box.lo[1]) * fj);
  };
  auto qualifies = [&](const Probe& pr) {
    return pr.regular && std::abs(pr.d) > kBand * pr.scale &&
           (margin <= 0 || std::abs(pr.d) >= margin);
  };
  // score favours a cleanly resolved discriminant sign: |D| / scale is in (0, 2]
  auto score = [](const Probe& pr) { return std::abs(pr.d) / std::max(pr.scale, 1e-300); };

  double best_score = -1, max_abs_d = 0;
  Eigen::Vector2d best = box.lo;
  Probe best_probe;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector2d r = grid_point(i / (n - 1.0), j / (n - 1.0));
      const Probe pr = probe_state(tag, p, r);
      if (pr.regular) max_abs_d = std::max(max_abs_d, std::abs(pr.d));
      if (!qualifies(pr)) continue;
      if (score(pr) > best_score) {
        best_score = score(pr);
        best = r;
        best_probe = pr;
      }
    }

  // one refinement pass around the best cell
  if (best_score > 0) {
    const Eigen::Vector2d cell((box.hi[0] - box.lo[0]) / (n - 1.0),
                               (box.hi[1] - box.lo[1]) / (n - 1.0));
    for (int i = -5; i <= 5; ++i)
      for (int j = -5; j <= 5; ++j) {
        Eigen::Vector2d r = best + Eigen::Vector2d(cell[0] * i / 5.0, cell[1] * j / 5.0);
        r = r.cwiseMax(box.lo).cwiseMin(box.hi);
        const Probe pr = probe_state(tag, p, r);
        if (!qualifies(pr)) continue;
        if (score(pr) > best_score) {
          best_score = score(pr);
          best = r;
          best_probe = pr;
        }
      }
  }

  if (best_score <= 0) throw SeedExhausted(max_abs_d);

  SeedCertificate cert;
  cert.reduced = best;
  cert.discriminant = best_probe.d;
  cert.margin = margin > 0 ? margin : kBand * best_probe.scale;
  const ClosedFormD cf = discriminant_closed_form(tag, p, best[0], best[1]);
  cert.closed_form = cf.value;
  cert.closed_partial = cf.partial;
  reduced_to_ode_state(tag, p, best, cert.t0, cert.ode_state);

  // axis distances to the nearest singular locus (leading factor or D zero band)
  const Eigen::Vector2d dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (int k = 0; k < 4; ++k) {
    const Eigen::Vector2d d = dirs[k];
    double reach = std::numeric_limits<double>::infinity();
    const double span = std::abs(d[0]) > 0 ? box.hi[0] - box.lo[0] : box.hi[1] - box.lo[1];
    double prev_lead = best_probe.lead, prev_d = best_probe.d;
    const int steps = 200;
    for (int m = 1; m <= steps; ++m) {
      const Eigen::Vector2d r = best + d * (span * m / steps);
      if (r[0] < box.lo[0] || r[0] > box.hi[0] || r[1] < box.lo[1] || r[1] > box.hi[1]) break;
      const Probe pr = probe_state(tag, p, r);
      const bool singular = !pr.regular || std::abs(pr.d) <= kBand * pr.scale ||
                            (prev_lead < 0) != (pr.lead < 0) || (prev_d < 0) != (pr.d < 0);
      if (singular) {
        reach = span * m / steps;
        break;
      }
      prev_lead = pr.lead;
      prev_d = pr.d;
    }
    cert.axis_distance[k] = reach;
  }
  return cert;
}

}  // namespace pke
