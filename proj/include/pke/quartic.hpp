#pragma once

#include <complex>
#include <string>
#include <vector>

#include "pke/jet2.hpp"

namespace pke {

/// Coefficients of the Weyl quartic  c5 xi^4 + 4 c4 xi^3 + 6 c3 xi^2 + 4 c2 xi + c1.
struct QuarticCoefficients {
  double c5 = 0, c4 = 0, c3 = 0, c2 = 0, c1 = 0;
};

struct QuarticInvariants {
  double I = 0, J = 0, D = 0, P = 0, R = 0;
};

enum class PetrovTag { Ir, Ic, Irc, IComplex, Degenerate, UnresolvedReal };

std::string to_string(PetrovTag t);

struct PetrovType {
  PetrovTag tag = PetrovTag::Degenerate;
  double margin = 0;  // |D| - eps * scale; negative inside the degeneracy band
};

/// Doubled fourth partials of the key function: (c5..c1) = 2 Theta_{xxxx..yyyy}.
QuarticCoefficients weyl_from_theta(const Jet2d& theta);

/// I, J, D = I^3 - 27 J^2, P, R of the quartic.
QuarticInvariants invariants(const QuarticCoefficients& q);

/// Degeneracy scale for |D|: max(|I|^3, 27 J^2, (max |c_i|)^6).
double discriminant_scale(const QuarticCoefficients& q, const QuarticInvariants& inv);

/// Real-slice classification: D<0 -> Irc; D>0 with P<0 and R<0 -> Ir;
/// D>0 with P>0 or R>0 -> Ic. |D| within the eps band -> Degenerate.
/// D>0 with P or R inside their own sign bands -> UnresolvedReal.
PetrovType classify_real(const QuarticCoefficients& q, const QuarticInvariants& inv,
                         double eps = 1e-9);
PetrovType classify_real(const QuarticCoefficients& q, double eps = 1e-9);

/// Complex-slice predicate: IComplex iff D is outside the degeneracy band.
PetrovType classify_complex(const QuarticCoefficients& q, double eps = 1e-9);

/// Root pattern of the quartic from companion-matrix eigenvalues.
struct RootPattern {
  std::vector<std::complex<double>> roots;  // finite roots
  int real_simple = 0;                      // simple real roots, infinity included
  int complex_pairs = 0;
  int infinity_multiplicity = 0;            // when the leading coefficient vanishes
  bool repeated = false;                    // any multiplicity >= 2 (incl. infinity)
  bool degenerate_by_leading = false;       // chart failure: c5 == 0
  std::vector<int> multiplicities;          // cluster sizes, descending
};

/// Independent classification oracle. tol clusters roots and decides reality.
RootPattern classify_by_roots(const QuarticCoefficients& q, double tol = 1e-8);

/// Map a root pattern onto the general types (Degenerate when repeated).
PetrovTag tag_from_pattern(const RootPattern& p);

}  // namespace pke
