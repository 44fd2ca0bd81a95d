#include "pke/example.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pke/quadrature.hpp"

namespace pke {

namespace {

double pow_int(double b, int n) {
  double r = 1.0;
  const double base = n < 0 ? 1.0 / b : b;
  for (int i = 0; i < std::abs(n); ++i) r *= base;
  return r;
}

void require_domain(double w, const ModelParams& p) {
  if (!(12.0 * w + p.lambda > 0.0))
    throw std::domain_error("example: 12 w + lambda must be > 0 (w = " + std::to_string(w) +
                            ")");
  if (w == 0.0) throw std::domain_error("example: w = 0 is a pole of Z");
  if (p.z0 == 0.0) throw std::invalid_argument("example: z0 must be nonzero");
  if (p.lambda == 0.0) throw std::invalid_argument("example: lambda must be nonzero");
}

}  // namespace

ZDerivatives example_z_derivs(double w, const ModelParams& p) {
  require_domain(w, p);
  const Jet2d zj = example_z_jet<double>(w, p.lambda, p.z0);
  return {zj.value(), zj.partial(1, 0), zj.partial(2, 0), zj.partial(3, 0), zj.partial(4, 0)};
}

ZBranch monotone_branch(double w0, const ModelParams& p) {
  require_domain(w0, p);
  const double wz = -p.lambda / 12.0;  // domain boundary
  const double wcrit = -p.lambda / 2.0;  // only zero of Z'
  std::vector<double> cuts{wz, 0.0};
  if (wcrit > wz) cuts.push_back(wcrit);
  std::sort(cuts.begin(), cuts.end());
  ZBranch b;
  b.lo = -std::numeric_limits<double>::infinity();
  b.hi = std::numeric_limits<double>::infinity();
  for (double c : cuts) {
    if (c < w0) b.lo = std::max(b.lo, c);
    if (c > w0) b.hi = std::min(b.hi, c);
  }
  if (b.lo < wz) b.lo = wz;
  b.increasing = example_z_derivs(w0, p).d1 > 0;
  return b;
}

double example_invert(double zval, const ZBranch& branch, const ModelParams& p) {
  // a usable branch cannot straddle the Z' zero at -lambda/2 or the pole at 0
  const double wcrit = -p.lambda / 2.0;
  if ((branch.lo < wcrit && wcrit < branch.hi) || (branch.lo < 0.0 && 0.0 < branch.hi))
    throw std::domain_error(
        "example_invert: requested interval is not monotone; Z' vanishes at w = " +
        std::to_string(wcrit) + " and Z has a pole at w = 0");
  // bracket inside the open branch interval, then safeguarded bisection/Newton
  const double span = std::isfinite(branch.hi) ? branch.hi - branch.lo : 1.0;
  double lo = branch.lo + 1e-9 * std::max(1.0, std::abs(branch.lo));
  double hi = std::isfinite(branch.hi)
                  ? branch.hi - 1e-9 * std::max(1.0, std::abs(branch.hi))
                  : branch.lo + std::max(1.0, 64.0 * span);
  auto val = [&](double w) { return example_z_derivs(w, p).z - zval; };
  double flo = val(lo), fhi = val(hi);
  int expand = 0;
  while ((flo < 0) == (fhi < 0) && !std::isfinite(branch.hi) && expand < 200) {
    hi *= 2.0;
    fhi = val(hi);
    ++expand;
  }
  if ((flo < 0) == (fhi < 0))
    throw std::domain_error("example_invert: z value not attained on the requested branch");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = val(mid);
    if (fm == 0.0 || (hi - lo) <= 1e-15 * std::max(1.0, std::abs(mid))) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

// F(w) = int_{w_ref}^{w} t Z'(t) dt gives Fz = Omega along the branch;
// the additive anchor drops out of every residual and curvature quantity.
double example_profile_value(double w, const ZBranch& branch, const ModelParams& p) {
  double wref;
  if (std::isfinite(branch.hi))
    wref = 0.5 * (branch.lo + branch.hi);
  else
    wref = branch.lo + std::max(1.0, std::abs(branch.lo));
  return integrate_gk([&](double t) { return t * example_z_derivs(t, p).d1; }, wref, w, 1e-10);
}

}  // namespace

Jet2d example_theta_jet(double x, double w, const ModelParams& p) {
  require_domain(w, p);
  if (x == 0.0) throw std::domain_error("example: x must be nonzero");
  const ZDerivatives zd = example_z_derivs(w, p);
  if (zd.d1 == 0.0)
    throw std::domain_error("example: Z'(w) = 0 at w = " + std::to_string(w) +
                            " (branch endpoint)");
  // inverse-function derivatives of Omega = Z^{-1} at z = Z(w)
  const double o1 = 1.0 / zd.d1;
  const double o2 = -zd.d2 / pow_int(zd.d1, 3);
  const double o3 = (3.0 * zd.d2 * zd.d2 - zd.d1 * zd.d3) / pow_int(zd.d1, 5);
  const ZBranch branch = monotone_branch(w, p);
  const double fval = example_profile_value(w, branch, p);
  const double y = zd.z / (x * x);
  const Jet2d X = Jet2d::variable_x(x, y), Y = Jet2d::variable_y(x, y);
  const std::array<double, 5> table{fval, w, o1, o2, o3};
  return Y * lift(table, Y * X * X);
}

Jet2d example_theta_jet_at_xy(double x, double y, const ZBranch& branch,
                              const ModelParams& p) {
  if (x == 0.0) throw std::domain_error("example: x must be nonzero");
  const double w = example_invert(y * x * x, branch, p);
  return example_theta_jet(x, w, p);
}

ExampleDPR example_dpr(double w, double x, const ModelParams& p) {
  const double L = p.lambda;
  if (w == 0.0 || w == -L / 12.0 || w == -L / 2.0 || x == 0.0)
    throw std::domain_error("pole: example D/P/R undefined at w in {0, -L/12, -L/2} or x = 0");
  const double s = L + 12.0 * w;
  ExampleDPR out;
  out.D = 4096.0 * 1e6 * pow_int(L, 6) * pow_int(w, 12) * s * s *
          (L * L - 196.0 * L * w + 4.0 * w * w) / pow_int(2.0 * w + L, 16);
  out.P = -51200.0 * L * p.z0 * p.z0 * pow_int(s, 6) /
          (27.0 * w * w * pow_int(x, 6) * pow_int(L + 2.0 * w, 8)) *
          (35.0 * pow_int(L, 4) - 1512.0 * L * L * w * w - 1728.0 * L * w * w * w +
           432.0 * pow_int(w, 4) + 400.0 * pow_int(L, 3) * w);
  out.R = 163840000.0 * L * L * pow_int(p.z0, 4) * pow_int(s, 12) /
          (729.0 * pow_int(w, 6) * pow_int(x, 12) * pow_int(L + 2.0 * w, 15)) *
          (pow_int(L, 9) - 16298496.0 * L * L * pow_int(w, 7) -
           32908032.0 * pow_int(L, 3) * pow_int(w, 6) -
           13473216.0 * pow_int(L, 4) * pow_int(w, 5) -
           2372256.0 * pow_int(L, 5) * pow_int(w, 4) -
           114720.0 * pow_int(L, 6) * pow_int(w, 3) - 1456.0 * pow_int(L, 7) * w * w +
           4665600.0 * L * pow_int(w, 8) + 1119744.0 * pow_int(w, 9) -
           138.0 * pow_int(L, 8) * w);
  return out;
}

namespace {

// safeguarded bracketing of all real roots of f on [lo, hi]
std::vector<double> bracket_roots(const std::function<double(double)>& f, double lo, double hi,
                                  int grid) {
  std::vector<double> roots;
  double prev_t = lo, prev_f = f(lo);
  for (int i = 1; i <= grid; ++i) {
    const double t = lo + (hi - lo) * i / grid;
    const double ft = f(t);
    if (prev_f == 0.0) roots.push_back(prev_t);
    if ((prev_f < 0) != (ft < 0)) {
      double a = prev_t, b = t, fa = prev_f;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0 || b - a < 1e-15 * std::max(1.0, std::abs(m))) break;
        if ((fm < 0) == (fa < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_t = t;
    prev_f = ft;
  }
  return roots;
}

}  // namespace

ExampleLandmarks example_landmarks(const ModelParams& p) {
  if (p.lambda == 0.0) throw std::invalid_argument("example_landmarks: lambda must be nonzero");
  const double L = p.lambda;
  ExampleLandmarks lm;
  // roots of 4 w^2 - 196 L w + L^2: exactly (49/2 +- 10 sqrt 6) L
  const double root6 = std::sqrt(6.0);
  lm.wD1 = (24.5 + 10.0 * root6) * L;
  lm.wD2 = (24.5 - 10.0 * root6) * L;
  if (L < 0) std::swap(lm.wD1, lm.wD2);

  auto quartic = [L](double w) {
    return 432.0 * pow_int(w, 4) - 1728.0 * L * w * w * w - 1512.0 * L * L * w * w +
           400.0 * pow_int(L, 3) * w + 35.0 * pow_int(L, 4);
  };
  auto nonic = [L](double w) {
    return 1119744.0 * pow_int(w, 9) + 4665600.0 * L * pow_int(w, 8) -
           16298496.0 * L * L * pow_int(w, 7) - 32908032.0 * pow_int(L, 3) * pow_int(w, 6) -
           13473216.0 * pow_int(L, 4) * pow_int(w, 5) -
           2372256.0 * pow_int(L, 5) * pow_int(w, 4) - 114720.0 * pow_int(L, 6) * w * w * w -
           1456.0 * pow_int(L, 7) * w * w - 138.0 * pow_int(L, 8) * w + pow_int(L, 9);
  };
  const double B = 8.0 * std::abs(L);
  std::vector<double> pr = bracket_roots(quartic, -B, B, 4000);
  std::vector<double> rr = bracket_roots(nonic, -B, B, 4000);
  if (pr.size() != 4)
    throw std::runtime_error("example_landmarks: expected 4 real P-roots, found " +
                             std::to_string(pr.size()));
  if (rr.size() != 5)
    throw std::runtime_error("example_landmarks: expected 5 real R-roots, found " +
                             std::to_string(rr.size()));
  std::sort(pr.begin(), pr.end(), std::greater<double>());
  std::sort(rr.begin(), rr.end(), std::greater<double>());
  std::copy(pr.begin(), pr.end(), lm.wP.begin());
  std::copy(rr.begin(), rr.end(), lm.wR.begin());
  lm.wR_pole = -0.5 * L;
  lm.wZ = -L / 12.0;
  lm.poles = {0.0, lm.wZ, lm.wR_pole};
  return lm;
}

TypeRangeReport type_ranges(const ModelParams& p, int samples_per_interval,
                            double boundary_band, double sample_cap) {
  validate_params(AlgebraTag::A35Half, p);
  if (p.z0 == 0.0) throw std::invalid_argument("type_ranges: z0 must be nonzero");
  const double L = p.lambda;
  const ExampleLandmarks lm = example_landmarks(p);

  TypeRangeReport rep;
  const double inf = std::numeric_limits<double>::infinity();
  if (L > 0) {
    rep.intervals.push_back({lm.wD2, lm.wD1, PetrovTag::Irc});
    rep.intervals.push_back({lm.wZ, lm.wD2, PetrovTag::Ic});
    rep.intervals.push_back({lm.wD1, inf, PetrovTag::Ic});
  } else {
    rep.intervals.push_back({lm.wZ, lm.wR_pole, PetrovTag::Ir});
    rep.intervals.push_back({lm.wR_pole, inf, PetrovTag::Ic});
  }

  // excluded bands around Z-poles and inversion-singular points
  std::vector<double> excl{0.0, -L / 2.0, lm.wZ, lm.wD1, lm.wD2};
  const double band = boundary_band * std::abs(L);

  rep.consistent = true;
  for (auto& iv : rep.intervals) {
    const double hi = std::min(iv.hi, sample_cap * std::abs(L));
    for (int i = 0; i < samples_per_interval; ++i) {
      const double frac = (i + 0.5) / samples_per_interval;
      const double w = iv.lo + (hi - iv.lo) * frac;
      bool near_excl = false;
      for (double e : excl)
        if (std::abs(w - e) < band) near_excl = true;
      if (near_excl || w <= lm.wZ) {
        ++iv.excluded;
        continue;
      }
      const Jet2d theta = example_theta_jet(1.0, w, p);
      const PetrovType t = classify_real(weyl_from_theta(theta));
      if (t.tag == PetrovTag::Degenerate || t.tag == PetrovTag::UnresolvedReal) {
        ++iv.unresolved;  // sign not resolvable at the band; boundary-adjacent
        continue;
      }
      ++iv.samples;
      if (t.tag == iv.expected)
        ++iv.agreed;
      else
        rep.consistent = false;
    }
  }
  return rep;
}

}  // namespace pke
