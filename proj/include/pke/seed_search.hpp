#pragma once

#include <Eigen/Core>

#include <array>
#include <stdexcept>

#include "pke/cases.hpp"

namespace pke {

/// 2D box in the case's reduced variables:
///   A32: (F, w = Fz);  A34/A35/A36/A37: (g, Q);  A35Half: (z, Omega).
struct SeedBox {
  Eigen::Vector2d lo, hi;
};

struct SeedCertificate {
  Eigen::Vector2d reduced;          // qualifying reduced state
  double discriminant = 0;          // jet-route D at the seed (authoritative)
  double closed_form = 0;           // tabulated closed form (or prefactor)
  bool closed_partial = false;
  double margin = 0;                // the |D| margin the seed was held to
  std::array<double, 4> axis_distance{};  // +u, -u, +v, -v to a singular locus
  double t0 = 0;                    // independent-variable anchor
  Eigen::Vector2d ode_state;        // (u, u') initial state for integration
};

struct SeedExhausted : std::runtime_error {
  explicit SeedExhausted(double max_abs_d)
      : std::runtime_error("find_nondegenerate_seed: no state exceeded the margin; max |D| = " +
                           std::to_string(max_abs_d)),
        max_abs_discriminant(max_abs_d) {}
  double max_abs_discriminant;
};

/// Plain grid search with one local refinement. A point qualifies when the
/// discriminant magnitude exceeds margin and the profile equation is regular
/// there; margin <= 0 selects 1e-3 of the largest |D| seen on the grid.
SeedCertificate find_nondegenerate_seed(AlgebraTag tag, const ModelParams& p,
                                        const SeedBox& box, int samples_per_axis = 41,
                                        double margin = 0);

/// Jet-route discriminant at a reduced state (independent of any trajectory).
double reduced_state_discriminant(AlgebraTag tag, const ModelParams& p,
                                  const Eigen::Vector2d& reduced);

/// Translation from reduced variables to (t0, (u, u')) integration data.
void reduced_to_ode_state(AlgebraTag tag, const ModelParams& p, const Eigen::Vector2d& reduced,
                          double& t0, Eigen::Vector2d& state);

}  // namespace pke
