#pragma once

#include <array>
#include <vector>

#include "pke/cases.hpp"
#include "pke/jet2.hpp"
#include "pke/quartic.hpp"

namespace pke {

// The explicit A35Half solution with zeta0 = 0:
//   Z(w) = z0 w^{-3} (12 w + lambda)^{5/2},  Omega = Z^{-1} on a monotone branch.
// Valid for 12 w + lambda > 0, w != 0.

/// Z and its first four derivatives at w.
struct ZDerivatives {
  double z = 0, d1 = 0, d2 = 0, d3 = 0, d4 = 0;
};

template <typename Scalar>
Jet2<Scalar> example_z_jet(Scalar w, Scalar lambda, Scalar z0) {
  if (!(12.0 * w + lambda > 0)) throw std::domain_error("example: 12 w + lambda must be > 0");
  if (w == Scalar(0)) throw std::domain_error("example: w = 0 is a pole of Z");
  const Jet2<Scalar> W = Jet2<Scalar>::variable_x(w, Scalar(0));
  return z0 * powi(W, -3) * pow(Scalar(12) * W + lambda, Scalar(2.5));
}

ZDerivatives example_z_derivs(double w, const ModelParams& p);

/// Monotone branch of Z containing w0 (Z' vanishes only at w = -lambda/2).
struct ZBranch {
  double lo = 0, hi = 0;  // open interval
  bool increasing = false;
};
ZBranch monotone_branch(double w0, const ModelParams& p);

/// Safeguarded inversion of Z on a branch: returns w with Z(w) = zval.
double example_invert(double zval, const ZBranch& branch, const ModelParams& p);

/// Degree-4 jet of the example key function Theta = y F(y x^2), parametrized
/// by w (the point is (x, y = Z(w)/x^2)). F is anchored at the branch seed.
Jet2d example_theta_jet(double x, double w, const ModelParams& p);

/// Same field evaluated at hyperheavenly coordinates via branch inversion.
Jet2d example_theta_jet_at_xy(double x, double y, const ZBranch& branch, const ModelParams& p);

/// Closed forms for the example discriminant and subtype invariants.
struct ExampleDPR {
  double D = 0, P = 0, R = 0;
};
ExampleDPR example_dpr(double w, double x, const ModelParams& p);

/// Landmark roots and poles of D, P, R in w (per unit lambda they are fixed).
struct ExampleLandmarks {
  double wD1 = 0, wD2 = 0;        // roots of the D quadratic, exact
  std::array<double, 4> wP{};     // real roots of the P quartic, descending
  std::array<double, 5> wR{};     // real roots of the R nonic, descending
  double wR_pole = 0;             // -lambda/2
  std::array<double, 3> poles{};  // {0, -lambda/12 boundary, -lambda/2}
  double wZ = 0;                  // domain boundary -lambda/12
};
ExampleLandmarks example_landmarks(const ModelParams& p);

/// Petrov-type intervals in w, cross-validated per interval by dense
/// jet-route sampling through classify_real. A sample the classifier cannot
/// resolve at its degeneracy band (Degenerate/Unresolved near an interval
/// boundary, where D -> 0 or its conditioning collapses) is logged as
/// excluded; only a resolved contradicting tag counts against consistency.
struct TypeInterval {
  double lo = 0, hi = 0;  // hi may be +infinity
  PetrovTag expected = PetrovTag::Degenerate;
  int samples = 0;      // resolved classifications
  int agreed = 0;       // resolved and matching the expected type
  int excluded = 0;     // boundary bands and pole-adjacent skips
  int unresolved = 0;   // classifier refused within its band (logged)
};
struct TypeRangeReport {
  std::vector<TypeInterval> intervals;
  bool consistent = false;  // no resolved sample contradicted its interval
};
TypeRangeReport type_ranges(const ModelParams& p, int samples_per_interval = 200,
                            double boundary_band = 5e-3, double sample_cap = 60.0);

}  // namespace pke
