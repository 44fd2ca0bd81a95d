#include "pke/quartic.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pke {

std::string to_string(PetrovTag t) {
  switch (t) {
    case PetrovTag::Ir: return "I_r";
    case PetrovTag::Ic: return "I_c";
    case PetrovTag::Irc: return "I_rc";
    case PetrovTag::IComplex: return "I_complex";
    case PetrovTag::Degenerate: return "Degenerate";
    case PetrovTag::UnresolvedReal: return "Unresolved-real-subtype";
  }
  return "?";
}

QuarticCoefficients weyl_from_theta(const Jet2d& theta) {
  QuarticCoefficients q;
  q.c5 = 2.0 * theta.partial(4, 0);
  q.c4 = 2.0 * theta.partial(3, 1);
  q.c3 = 2.0 * theta.partial(2, 2);
  q.c2 = 2.0 * theta.partial(1, 3);
  q.c1 = 2.0 * theta.partial(0, 4);
  return q;
}

QuarticInvariants invariants(const QuarticCoefficients& q) {
  QuarticInvariants r;
  r.I = q.c1 * q.c5 - 4.0 * q.c2 * q.c4 + 3.0 * q.c3 * q.c3;
  r.J = q.c5 * (q.c3 * q.c1 - q.c2 * q.c2) - q.c4 * (q.c4 * q.c1 - q.c2 * q.c3) +
        q.c3 * (q.c4 * q.c2 - q.c3 * q.c3);
  r.D = r.I * r.I * r.I - 27.0 * r.J * r.J;
  r.P = 48.0 * (q.c3 * q.c5 - q.c4 * q.c4);
  r.R = 64.0 * (q.c1 * q.c5 * q.c5 * q.c5 - 9.0 * q.c3 * q.c3 * q.c5 * q.c5 +
                24.0 * q.c3 * q.c5 * q.c4 * q.c4 - 4.0 * q.c2 * q.c4 * q.c5 * q.c5 -
                12.0 * q.c4 * q.c4 * q.c4 * q.c4);
  return r;
}

double discriminant_scale(const QuarticCoefficients& q, const QuarticInvariants& inv) {
  // magnitude of the monomials entering D through the whole evaluation tree:
  // D = I^3 - 27 J^2 with I, J themselves alternating sums, so the rounding
  // envelope is 3 I^2 |dI| + 54 |J| |dJ| with |dI|, |dJ| bounded by the
  // one-signed sums below (degree 6 in the c_i overall)
  const double si = std::abs(q.c1 * q.c5) + 4.0 * std::abs(q.c2 * q.c4) + 3.0 * q.c3 * q.c3;
  const double sj = std::abs(q.c5 * q.c3 * q.c1) + std::abs(q.c5 * q.c2 * q.c2) +
                    std::abs(q.c4 * q.c4 * q.c1) + 2.0 * std::abs(q.c4 * q.c2 * q.c3) +
                    std::abs(q.c3 * q.c3 * q.c3);
  return 3.0 * inv.I * inv.I * si + 54.0 * std::abs(inv.J) * sj;
}

PetrovType classify_real(const QuarticCoefficients& q, const QuarticInvariants& inv,
                         double eps) {
  if (eps < 0) throw std::invalid_argument("classify_real: eps must be >= 0");
  PetrovType t;
  const double scale = discriminant_scale(q, inv);
  t.margin = std::abs(inv.D) - eps * scale;
  if (t.margin <= 0) {
    t.tag = PetrovTag::Degenerate;
    return t;
  }
  if (inv.D < 0) {
    t.tag = PetrovTag::Irc;
    return t;
  }
  // D > 0: split all-real vs all-complex with sign bands on P and R
  const double tolP = eps * 48.0 * (std::abs(q.c3 * q.c5) + q.c4 * q.c4);
  const double tolR =
      eps * 64.0 *
      (std::abs(q.c1) * std::abs(q.c5 * q.c5 * q.c5) + 9.0 * q.c3 * q.c3 * q.c5 * q.c5 +
       24.0 * std::abs(q.c3 * q.c5) * q.c4 * q.c4 + 4.0 * std::abs(q.c2 * q.c4) * q.c5 * q.c5 +
       12.0 * q.c4 * q.c4 * q.c4 * q.c4);
  if (inv.P > tolP || inv.R > tolR)
    t.tag = PetrovTag::Ic;
  else if (inv.P < -tolP && inv.R < -tolR)
    t.tag = PetrovTag::Ir;
  else
    t.tag = PetrovTag::UnresolvedReal;
  return t;
}

PetrovType classify_real(const QuarticCoefficients& q, double eps) {
  return classify_real(q, invariants(q), eps);
}

PetrovType classify_complex(const QuarticCoefficients& q, double eps) {
  const QuarticInvariants inv = invariants(q);
  PetrovType t;
  t.margin = std::abs(inv.D) - eps * discriminant_scale(q, inv);
  t.tag = t.margin <= 0 ? PetrovTag::Degenerate : PetrovTag::IComplex;
  return t;
}

RootPattern classify_by_roots(const QuarticCoefficients& q, double tol) {
  // monomial coefficients a4 xi^4 + ... + a0
  const double a[5] = {q.c1, 4.0 * q.c2, 6.0 * q.c3, 4.0 * q.c4, q.c5};
  int deg = 4;
  while (deg > 0 && a[deg] == 0.0) --deg;
  if (deg == 0 && a[0] == 0.0)
    throw std::invalid_argument("classify_by_roots: all-zero quartic has no root pattern");

  RootPattern p;
  p.infinity_multiplicity = 4 - deg;
  p.degenerate_by_leading = (deg < 4);

  if (deg > 0) {
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -a[i] / a[deg];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (int i = 0; i < deg; ++i) p.roots.push_back(es.eigenvalues()[i]);
  }

  // cluster finite roots at tolerance tol (scaled by the root magnitude)
  std::vector<bool> used(p.roots.size(), false);
  std::vector<std::vector<std::complex<double>>> clusters;
  for (size_t i = 0; i < p.roots.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::complex<double>> cl{p.roots[i]};
    used[i] = true;
    for (size_t j = i + 1; j < p.roots.size(); ++j) {
      if (used[j]) continue;
      const double sep = std::abs(p.roots[i] - p.roots[j]);
      if (sep <= tol * std::max(1.0, std::abs(p.roots[i]))) {
        cl.push_back(p.roots[j]);
        used[j] = true;
      }
    }
    clusters.push_back(std::move(cl));
  }

  for (const auto& cl : clusters) {
    p.multiplicities.push_back(static_cast<int>(cl.size()));
    std::complex<double> mean(0, 0);
    for (const auto& r : cl) mean += r;
    mean /= static_cast<double>(cl.size());
    const bool real = std::abs(mean.imag()) <= tol * std::max(1.0, std::abs(mean.real()));
    if (real && cl.size() == 1) ++p.real_simple;
    if (!real) ++p.complex_pairs;  // counted per member; halved below
  }
  p.complex_pairs /= 2;
  if (p.infinity_multiplicity == 1) ++p.real_simple;  // [1:0] is a real projective root
  if (p.infinity_multiplicity >= 2) p.repeated = true;
  p.multiplicities.push_back(p.infinity_multiplicity);
  for (int m : p.multiplicities)
    if (m >= 2) p.repeated = true;
  std::sort(p.multiplicities.begin(), p.multiplicities.end(), std::greater<int>());
  while (!p.multiplicities.empty() && p.multiplicities.back() == 0) p.multiplicities.pop_back();
  return p;
}

PetrovTag tag_from_pattern(const RootPattern& p) {
  if (p.repeated) return PetrovTag::Degenerate;
  if (p.real_simple == 4) return PetrovTag::Ir;
  if (p.real_simple == 2) return PetrovTag::Irc;
  if (p.real_simple == 0) return PetrovTag::Ic;
  return PetrovTag::Degenerate;  // odd real count only happens inside tolerance bands
}

}  // namespace pke
