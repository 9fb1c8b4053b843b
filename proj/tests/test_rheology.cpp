// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "seaice/error.hpp"
#include "seaice/rheology.hpp"
#include "support.hpp"

using namespace seaice;
using namespace seaice::test;

namespace {

TensorField constant_tensor(const Grid& g, double xx, double xy, double yx, double yy) {
  return TensorField(ScalarField(g, xx), ScalarField(g, xy), ScalarField(g, yx), ScalarField(g, yy));
}

}  // namespace

TEST_SUITE("rheology") {

TEST_CASE("pressure") {
  const Grid g(4, 4);
  PhysParams pp;
  pp.c_p = 2.0;
  pp.c_a = 1.0;
  CHECK(pressure(ScalarField(g, 1.0), ScalarField(g, 0.0), pp) == ScalarField(g, 2.0));
  pp.c_p = 1.0;
  const ScalarField p = pressure(ScalarField(g, 2.0), ScalarField(g, 1.0), pp);
  CHECK(p.min() == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-15));
  CHECK(p.max() == doctest::Approx(5.436564).epsilon(1e-6));
  CHECK(norm_lp(pressure(ScalarField(g, 0.0), ScalarField(g, 0.7), pp), kLinf) == 0.0);
}

TEST_CASE("viscous-plastic stress") {
  const Grid g(4, 4);
  SUBCASE("no deformation, no stress") {
    const TensorField s = stress_vp(ScalarField(g, 2.0), TensorField(g), ScalarField(g), 0.1);
    CHECK(inner(s, s) == 0.0);
  }
  SUBCASE("pointwise formula") {
    // grad u = [[1, 0], [0, 0]] gives D = [[2, 0], [0, 0]] and div u = 1.
    const TensorField s = stress_vp(ScalarField(g, 1.0), constant_tensor(g, 1, 0, 0, 0), ScalarField(g, 1.0), 1.0);
    CHECK(s.xx[0] == doctest::Approx(2.0 / std::sqrt(5.0) + 1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(s.xx[4] == doctest::Approx(1.601534).epsilon(1e-6));
    CHECK(s.yy[0] == doctest::Approx(0.707107).epsilon(1e-6));
    CHECK(s.xy[0] == 0.0);
    CHECK(s.yx[0] == 0.0);
  }
  SUBCASE("eps must be positive") {
    CHECK_THROWS_AS(stress_vp(ScalarField(g, 1.0), TensorField(g), ScalarField(g), 0.0), Error);
  }
}

TEST_CASE("saturating term stays below the strength and reaches it asymptotically") {
  const double p = 1.7, eps = 0.1;
  const Mat2 dir{0.6, -0.3, -0.3, 0.2};
  const double dnorm = std::sqrt(frob_dot(dir, dir));
  double prev = 0.0;
  for (double t = 1e-3; t <= 1e9; t *= 10.0) {
    const Mat2 g{t * dir[0], t * dir[1], t * dir[2], t * dir[3]};
    const Mat2 s = saturating_term(p, g, eps);
    const double n = std::sqrt(frob_dot(s, s));
    CHECK(n <= p * (1.0 + 1e-15));
    CHECK(n >= prev * (1.0 - 1e-15));
    prev = n;
    // direction is preserved
    CHECK(std::abs(frob_dot(s, dir) / (n * dnorm) - 1.0) < 1e-14);
  }
  CHECK(prev == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("Newtonian stress") {
  const Grid g(4, 4);
  CHECK(inner(stress_newtonian(constant_tensor(g, 1, 2, 3, 4), ScalarField(g, 5.0), 0.0, 0.0),
              stress_newtonian(constant_tensor(g, 1, 2, 3, 4), ScalarField(g, 5.0), 0.0, 0.0)) == 0.0);
  // D = [[0, 1], [1, 0]] from grad u = [[0, 1], [0, 0]]
  const TensorField shear = stress_newtonian(constant_tensor(g, 0, 1, 0, 0), ScalarField(g), 1.0, 0.0);
  CHECK(shear.xx[0] == 0.0);
  CHECK(shear.xy[0] == 1.0);
  CHECK(shear.yx[0] == 1.0);
  CHECK(shear.yy[0] == 0.0);
  const TensorField s = stress_newtonian(constant_tensor(g, 1, 0, 0, 0), ScalarField(g, 1.0), 2.0, 3.0);
  CHECK(s.xx[0] == 7.0);
  CHECK(s.yy[0] == 3.0);
  CHECK(s.xy[0] == 0.0);
}

TEST_CASE("stress divergence") {
  const Grid g(64, 64);
  CHECK(norm_lp(stress_divergence(constant_tensor(g, 1, 2, 3, 4)), kLinf) == 0.0);

  Rng rng(21);
  const ScalarField s = rng.noise(g, -1, 1);
  const VectorField d = stress_divergence(TensorField(s, ScalarField(g), ScalarField(g), s));
  CHECK(d == grad(s));

  auto f = [&](auto fn) { return sample(g, fn); };
  const TensorField S(f([](double x, double y) { return std::sin(kTwoPi * x) * std::cos(kTwoPi * y); }),
                      f([](double x, double) { return std::cos(kTwoPi * x); }),
                      f([](double, double y) { return std::sin(kTwoPi * y); }),
                      f([](double x, double y) { return std::sin(kTwoPi * x) * std::sin(kTwoPi * y); }));
  const ScalarField ex = f([](double x, double y) { return kTwoPi * std::cos(kTwoPi * x) * std::cos(kTwoPi * y); });
  const ScalarField ey = f([](double x, double y) { return kTwoPi * std::sin(kTwoPi * x) * std::cos(kTwoPi * y); });
  const VectorField ds = stress_divergence(S);
  const double bound = std::pow(kTwoPi, 3) * g.dx() * g.dx() / 6.0 * 1.01;
  CHECK(max_abs_diff(ds.x, ex) <= bound);
  CHECK(max_abs_diff(ds.y, ey) <= bound);
}

TEST_CASE("monotonicity gap") {
  const Mat2 G{0.3, -1.2, 0.5, 0.9};
  SUBCASE("equal arguments") {
    const MonotonicityGap same = monotonicity_gap(1.3, 1.3, G, G, 0.1);
    CHECK(same.lhs == 0.0);
    const MonotonicityGap dp = monotonicity_gap(2.0, 0.5, G, G, 0.1);
    CHECK(dp.lhs == 0.0);
    CHECK(dp.pressure == doctest::Approx(0.0));
    CHECK(dp.M == doctest::Approx(0.0));
  }
  SUBCASE("two-point evaluation") {
    const MonotonicityGap m = monotonicity_gap(1.0, 1.0, {1, 0, 0, 0}, {0, 0, 0, 0}, 1.0);
    CHECK(m.lhs == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(m.lhs == doctest::Approx(0.707107).epsilon(1e-6));
    CHECK(m.bound == doctest::Approx(m.lhs).epsilon(1e-14));
  }
  SUBCASE("scalar arguments") {
    const MonotonicityGap m = monotonicity_gap(2.0, 2.0, {3, 0, 0, 0}, {-1, 0, 0, 0}, 0.5);
    CHECK(m.lhs > 0.0);
    CHECK(m.lower <= m.lhs * (1.0 + 1e-12));
  }
  SUBCASE("random samples with equal strength") {
    Rng rng(22);
    const double eps_choices[3] = {1e-3, 1e-1, 1.0};
    for (int s = 0; s < 100000; ++s) {
      const double p = rng.uniform(0.15, 10.0), eps = eps_choices[s % 3];
      Mat2 g1, g2, dg;
      for (double& v : g1) v = rng.uniform(-2, 2);
      for (double& v : g2) v = rng.uniform(-2, 2);
      for (int k = 0; k < 4; ++k) dg[k] = g1[k] - g2[k];
      const MonotonicityGap m = monotonicity_gap(p, p, g1, g2, eps);
      const double mag = std::abs(frob_dot(saturating_term(p, g1, eps), dg)) +
                         std::abs(frob_dot(saturating_term(p, g2, eps), dg));
      REQUIRE(m.lhs >= -1e-14 * mag);
      REQUIRE(std::abs(m.lhs - m.bound) <= 1e-12 * std::max(std::abs(m.lhs), std::abs(m.bound)));
      REQUIRE(m.lower <= m.lhs * (1.0 + 1e-12));
    }
  }
  SUBCASE("unequal strengths still reconstruct") {
    Rng rng(23);
    for (int s = 0; s < 1000; ++s) {
      Mat2 g1, g2;
      for (double& v : g1) v = rng.uniform(-2, 2);
      for (double& v : g2) v = rng.uniform(-2, 2);
      const MonotonicityGap m = monotonicity_gap(rng.uniform(0.15, 10), rng.uniform(0.15, 10), g1, g2, 0.1);
      REQUIRE(std::abs(m.lhs - m.bound) <= 1e-11 * (std::abs(m.lhs) + std::abs(m.pressure) + 1e-300));
    }
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(monotonicity_gap(0.0, 1.0, G, G, 0.1), Error);
    CHECK_THROWS_AS(monotonicity_gap(1.0, 1.0, G, G, 0.0), Error);
  }
}

}  // TEST_SUITE
