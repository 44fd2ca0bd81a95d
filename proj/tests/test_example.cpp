#include <doctest.h>

#include <cmath>

#include "pke/example.hpp"
#include "pke/quartic.hpp"

using namespace pke;

TEST_CASE("Z evaluation and derivatives") {
  ModelParams p;  // lambda = 1, z0 = 1
  const ZDerivatives zd = example_z_derivs(1.0, p);
  CHECK(zd.z == doctest::Approx(std::pow(13.0, 2.5)).epsilon(1e-14));  // 13^{5/2}
  // Z' = -3 z0 w^{-4} (12w+L)^{3/2} (2w+L)
  CHECK(zd.d1 == doctest::Approx(-3.0 * std::pow(13.0, 1.5) * 3.0).epsilon(1e-13));
  CHECK_THROWS_AS(example_z_derivs(-0.2, p), std::domain_error);  // 12w + L < 0
  CHECK_THROWS_AS(example_z_derivs(0.0, p), std::domain_error);
}

TEST_CASE("monotone branches and inversion") {
  ModelParams p;  // lambda = 1: branches (-1/12, 0) and (0, inf)
  const ZBranch pos = monotone_branch(1.0, p);
  CHECK(pos.lo == doctest::Approx(0.0));
  CHECK(std::isinf(pos.hi));
  CHECK_FALSE(pos.increasing);  // z0 > 0: decreasing on w > 0

  for (double w : {0.3, 0.9, 2.5, 20.0}) {
    const double z = example_z_derivs(w, p).z;
    CHECK(example_invert(z, pos, p) == doctest::Approx(w).epsilon(1e-10));
  }

  const ZBranch neg = monotone_branch(-0.05, p);
  CHECK(neg.lo == doctest::Approx(-1.0 / 12.0));
  CHECK(neg.hi == doctest::Approx(0.0));

  // lambda < 0: Z' vanishes at w = -lambda/2; branch split there
  ModelParams pm;
  pm.lambda = -1.0;
  const ZBranch left = monotone_branch(0.2, pm);
  CHECK(left.lo == doctest::Approx(1.0 / 12.0));
  CHECK(left.hi == doctest::Approx(0.5));
  const ZBranch right = monotone_branch(1.0, pm);
  CHECK(right.lo == doctest::Approx(0.5));
  // requesting a value from the wrong branch fails
  const double z_right = example_z_derivs(1.0, pm).z;
  const double z_left = example_z_derivs(0.2, pm).z;
  CHECK(example_invert(z_right, right, pm) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(example_invert(z_left, left, pm) == doctest::Approx(0.2).epsilon(1e-10));

  // a hand-built interval straddling the Z' zero is rejected with its location
  ZBranch bad{0.2, 3.0, false};
  CHECK_THROWS_WITH_AS(example_invert(1.0, bad, pm), doctest::Contains("Z' vanishes"),
                       std::domain_error);
}

TEST_CASE("example jets reproduce the closed-form D, P, R") {
  ModelParams p;  // lambda = 1, z0 = 1
  const double w = 0.9, x = 1.1;
  const Jet2d th = example_theta_jet(x, w, p);
  const QuarticInvariants inv = invariants(weyl_from_theta(th));
  // frozen from exact evaluation
  CHECK(inv.D == doctest::Approx(-1942843.5432094991).epsilon(1e-10));
  CHECK(inv.P == doctest::Approx(1705335514.4600622).epsilon(1e-10));
  CHECK(inv.R == doctest::Approx(-6.2489702238272838e18).epsilon(1e-10));
  const ExampleDPR dpr = example_dpr(w, x, p);
  CHECK(inv.D == doctest::Approx(dpr.D).epsilon(1e-10));
  CHECK(inv.P == doctest::Approx(dpr.P).epsilon(1e-10));
  CHECK(inv.R == doctest::Approx(dpr.R).epsilon(1e-10));
  // the key function solves the reduced equation
  CHECK(std::abs(reduced_hh_residual(th, p.lambda)) < 1e-7 * std::abs(th.partial(2, 0)));
}

TEST_CASE("pole inputs produce pole reports") {
  ModelParams p;
  CHECK_THROWS_AS(example_dpr(-0.5, 1.0, p), std::domain_error);   // R pole
  CHECK_THROWS_AS(example_dpr(0.0, 1.0, p), std::domain_error);
  CHECK_THROWS_AS(example_dpr(1.0, 0.0, p), std::domain_error);
  CHECK_THROWS_AS(example_theta_jet(0.0, 1.0, p), std::domain_error);
}

TEST_CASE("D is independent of x and z0; P, R are not") {
  ModelParams p;
  const double w = 1.7;
  const ExampleDPR a = example_dpr(w, 1.0, p);
  ModelParams p2;
  p2.z0 = 2.0;
  const ExampleDPR b = example_dpr(w, 1.6, p2);
  CHECK(a.D == doctest::Approx(b.D).epsilon(1e-14));
  CHECK(a.P != b.P);
  CHECK(a.R != b.R);
  // jet route sees the same invariance
  const Jet2d t1 = example_theta_jet(1.0, w, p);
  const Jet2d t2 = example_theta_jet(1.6, w, p2);
  CHECK(invariants(weyl_from_theta(t1)).D ==
        doctest::Approx(invariants(weyl_from_theta(t2)).D).epsilon(1e-9));
}

TEST_CASE("xy-route inversion matches the w-parametrized field") {
  ModelParams p;
  const ZBranch branch = monotone_branch(1.2, p);
  const double w = 1.2, x = 0.8;
  const double y = example_z_derivs(w, p).z / (x * x);
  const Jet2d a = example_theta_jet(x, w, p);
  const Jet2d b = example_theta_jet_at_xy(x, y, branch, p);
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j)
      CHECK(a.partial(i, j) == doctest::Approx(b.partial(i, j)).epsilon(1e-8));
}

TEST_CASE("landmark roots and poles against reference values") {
  ModelParams p;  // lambda = 1
  const ExampleLandmarks lm = example_landmarks(p);
  CHECK(lm.wD1 == doctest::Approx(48.99489742783178).epsilon(1e-12));
  CHECK(lm.wD2 == doctest::Approx(0.005102572168219018).epsilon(1e-9));
  CHECK(lm.wP[0] == doctest::Approx(4.701740638324821).epsilon(1e-9));
  CHECK(lm.wP[1] == doctest::Approx(0.27138558178159716).epsilon(1e-9));
  CHECK(lm.wP[2] == doctest::Approx(-0.07033149436509509).epsilon(1e-9));
  CHECK(lm.wP[3] == doctest::Approx(-0.9027947257413222).epsilon(1e-9));
  CHECK(lm.wR[0] == doctest::Approx(3.299013614268617).epsilon(1e-9));
  CHECK(lm.wR[1] == doctest::Approx(0.006532039103957265).epsilon(1e-9));
  CHECK(lm.wR[2] == doctest::Approx(-0.08026564522895824).epsilon(1e-9));
  CHECK(lm.wR[3] == doctest::Approx(-1.1303207058961657).epsilon(1e-9));
  CHECK(lm.wR[4] == doctest::Approx(-5.853740649273618).epsilon(1e-9));
  CHECK(lm.wR_pole == -0.5);
  CHECK(lm.wZ == doctest::Approx(-1.0 / 12.0));

  // D really vanishes at the quadratic roots
  for (double wd : {lm.wD1, lm.wD2})
    CHECK(std::abs(example_dpr(wd, 1.0, p).D) < 1e-6);
  // sign of P flips across wP2
  CHECK(example_dpr(lm.wP[1] + 1e-3, 1.0, p).P * example_dpr(lm.wP[1] - 1e-3, 1.0, p).P < 0);
}

TEST_CASE("type ranges for both lambda signs") {
  ModelParams p;  // lambda = +1
  const TypeRangeReport rp = type_ranges(p, 120);
  CHECK(rp.consistent);
  REQUIRE(rp.intervals.size() == 3);
  CHECK(rp.intervals[0].expected == PetrovTag::Irc);
  CHECK(rp.intervals[0].agreed == rp.intervals[0].samples);
  CHECK(rp.intervals[0].samples > 0);
  CHECK(rp.intervals[1].expected == PetrovTag::Ic);
  CHECK(rp.intervals[2].expected == PetrovTag::Ic);

  ModelParams pm;
  pm.lambda = -1.0;
  const TypeRangeReport rm = type_ranges(pm, 120);
  CHECK(rm.consistent);
  REQUIRE(rm.intervals.size() == 2);
  CHECK(rm.intervals[0].expected == PetrovTag::Ir);
  CHECK(rm.intervals[0].lo == doctest::Approx(1.0 / 12.0));
  CHECK(rm.intervals[0].hi == doctest::Approx(0.5));
  CHECK(rm.intervals[1].expected == PetrovTag::Ic);

  // boundary: exactly at wD1 the tag is Degenerate
  const ExampleLandmarks lm = example_landmarks(p);
  const Jet2d th = example_theta_jet(1.0, lm.wD1, p);
  CHECK(classify_real(weyl_from_theta(th)).tag == PetrovTag::Degenerate);
}
