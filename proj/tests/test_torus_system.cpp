/*
 * Copyright 2026 The holonomy-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include "holonomy_lab/audits.hpp"
#include "holonomy_lab/error.hpp"
#include "holonomy_lab/rho_gauge.hpp"
#include "holonomy_lab/torus_system.hpp"
#include "test_support.hpp"

using namespace hlab;
using hlab::testing::cubic_root;
using hlab::testing::golden_lambda;
using hlab::testing::rel_err;

namespace {

ErrorCode validation_code(const char* m) {
  try {
    (void)validate_real_anosov(IntMatrix::parse(m));
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ok;
}

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

double inf_norm(const Vec& v) { return v.lpNorm<Eigen::Infinity>(); }

}  // namespace

TEST(Splitting, CatMapMatchesQuadraticFormula) {
  const auto s = validate_real_anosov(IntMatrix::parse(hlab::testing::kCatMap));
  EXPECT_NEAR(s.lambda, golden_lambda(), 1e-12);
  EXPECT_NEAR(s.lambda, 2.6180339887, 1e-10);
  ASSERT_EQ(s.stable_rates.size(), 1u);
  EXPECT_NEAR(s.stable_rates[0], 0.3819660113, 1e-10);
  EXPECT_EQ(s.exponents, (std::vector<double>{1.0, 1.0}));
  Eigen::Matrix2d a;
  a << 2, 1, 1, 1;
  for (int c = 0; c < 2; ++c) {
    const Vec v = s.basis.col(c);
    EXPECT_NEAR(v.norm(), 1.0, 1e-15);
    EXPECT_GT(v[0], 0.0);
    EXPECT_LT(inf_norm(a * v - s.eigenvalues[static_cast<std::size_t>(c)] * v), 1e-12);
  }
}

TEST(Splitting, CubicCompanionRatesAndExponents) {
  const auto s = validate_real_anosov(IntMatrix::parse(hlab::testing::kCubic));
  ASSERT_EQ(s.stable_dim(), 1u);
  ASSERT_EQ(s.unstable_dim(), 2u);
  const double stable = cubic_root(3);
  EXPECT_NEAR(s.stable_rates[0], stable, 1e-14);
  EXPECT_NEAR(s.unstable_rates[0], -cubic_root(5), 1e-14);
  EXPECT_NEAR(s.unstable_rates[1], cubic_root(1), 1e-14);
  EXPECT_NEAR(s.stable_rates[0], 0.44504, 1e-5);
  EXPECT_NEAR(s.lambda, 1.0 / stable, 1e-13);
  EXPECT_NEAR(s.lambda, 2.24698, 1e-5);
  EXPECT_EQ(s.stable_exponents[0], 1.0);
  const double l = std::log(1.0 / stable);
  EXPECT_NEAR(s.unstable_exponents[0], l / std::log(-cubic_root(5)), 1e-12);
  EXPECT_NEAR(s.unstable_exponents[1], l / std::log(cubic_root(1)), 1e-12);
  // Independently computed to 7 digits with arbitrary precision.
  EXPECT_NEAR(s.unstable_exponents[0], 3.667865, 1e-6);
  EXPECT_NEAR(s.unstable_exponents[1], 1.374832, 1e-6);
}

TEST(Splitting, RejectsNonRealAnosovMatrices) {
  EXPECT_EQ(validation_code("1,1;0,1"), ErrorCode::not_hyperbolic);
  EXPECT_EQ(validation_code("0,1;1,0"), ErrorCode::not_hyperbolic);
  EXPECT_EQ(validation_code("2,0;0,1"), ErrorCode::not_unimodular);
  EXPECT_EQ(validation_code("0,-1;1,0"), ErrorCode::complex_spectrum);
  EXPECT_EQ(validation_code("2,1,0,0;1,1,0,0;0,0,2,1;0,0,1,1"), ErrorCode::repeated_eigenvalue);
  EXPECT_EQ(validation_code("3"), ErrorCode::invalid_argument);
  EXPECT_EQ(validation_code("2,1;1,1"), ErrorCode::ok);
}

TEST(Splitting, InverseSwapsRoles) {
  for (const char* m : {hlab::testing::kCatMap, hlab::testing::kCubic}) {
    const IntMatrix a = IntMatrix::parse(m);
    const auto s = validate_real_anosov(a);
    const auto t = validate_real_anosov(unimodular_inverse(a));
    EXPECT_NEAR(s.lambda, t.lambda, 1e-12);
    ASSERT_EQ(s.stable_dim(), t.unstable_dim());
    ASSERT_EQ(s.unstable_dim(), t.stable_dim());
    for (std::size_t i = 0; i < s.stable_dim(); ++i) {
      EXPECT_NEAR(s.stable_rates[i], 1.0 / t.unstable_rates[t.unstable_dim() - 1 - i], 1e-12);
    }
  }
}

TEST(TorusSystem, IterationScalesEigenCoordinates) {
  const TorusSystem sys(IntMatrix::parse(hlab::testing::kCatMap));
  const TorusLeafPoint p = sys.from_eigen(v2(0.1, 0.0));
  const TorusLeafPoint q = sys.iterate(p, 1);
  EXPECT_NEAR(q.eigen_coords()[0], 0.1 / golden_lambda(), 1e-15);
  EXPECT_EQ(q.eigen_coords()[1], 0.0);
  EXPECT_EQ(sys.iterate(p, 0).lift(), p.lift());
  const TorusLeafPoint x = sys.point(v2(0.3, 0.7));
  EXPECT_LT(inf_norm(sys.iterate(sys.iterate(x, -1), 1).eigen_coords() - x.eigen_coords()), 1e-12);
  // A applied to the lift agrees with the diagonal action.
  EXPECT_LT(inf_norm(sys.iterate(x, 1).lift() - v2(2 * 0.3 + 0.7, 0.3 + 0.7)), 1e-12);
}

TEST(TorusSystem, HorizonIsEnforced) {
  const TorusSystem sys(IntMatrix::parse(hlab::testing::kCatMap), 10);
  const TorusLeafPoint x = sys.point(v2(0.1, 0.2));
  EXPECT_NO_THROW((void)sys.iterate(x, 10));
  try {
    (void)sys.iterate(x, -11);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::horizon_exceeded);
  }
}

TEST(TorusSystem, NearestLiftDisplacement) {
  const TorusSystem sys(IntMatrix::parse(hlab::testing::kCatMap));
  const TorusLeafPoint o = sys.point(v2(0, 0));
  EXPECT_LT(inf_norm(sys.nearest_lift_displacement(o, sys.point(v2(0.1, 0.05))) - v2(0.1, 0.05)), 1e-15);
  EXPECT_LT(inf_norm(sys.nearest_lift_displacement(o, sys.point(v2(0.9, 0.0))) - v2(-0.1, 0.0)), 1e-15);
  EXPECT_EQ(sys.nearest_lift_displacement(o, sys.point(v2(0.5, 0.0))), v2(0.5, 0.0));
  EXPECT_EQ(sys.nearest_lift_displacement(o, sys.point(v2(-0.5, 0.0))), v2(0.5, 0.0));
}

TEST(TorusSystem, BracketExample) {
  const TorusSystem sys(IntMatrix::parse(hlab::testing::kCatMap));
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  // Solve s (-1/phi, 1) + t (phi, 1) = (0.1, 0.05).
  const double s = (0.05 * phi - 0.1) / (phi + 1.0 / phi);
  const TorusLeafPoint x = sys.point(v2(0, 0));
  const TorusLeafPoint y = sys.point(v2(0.1, 0.05));
  const TorusLeafPoint z = sys.bracket(x, y, 0.2);
  EXPECT_NEAR(z.lift()[0], -s / phi, 1e-15);
  EXPECT_NEAR(z.lift()[1], s, 1e-15);
  EXPECT_NEAR(z.lift()[0], 0.005279, 1e-6);
  EXPECT_NEAR(z.lift()[1], -0.008541, 1e-6);
  EXPECT_LT(sys.off_bundle(sys.leaf_displacement(x, z), Leaf::stable), 1e-12);
  EXPECT_LT(sys.off_bundle(sys.leaf_displacement(y, z), Leaf::unstable), 1e-12);
  // The pair has gauge about 0.111, outside the default delta0.
  try {
    (void)sys.bracket(x, y, 0.05);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::too_far_apart);
  }
}

TEST(TorusSystem, BracketProjectionIdentities) {
  const TorusSystem sys(IntMatrix::parse(hlab::testing::kCatMap));
  const TorusLeafPoint x = sys.point(v2(0.25, 0.6));
  EXPECT_LT(inf_norm(sys.bracket(x, x, 0.01).eigen_coords() - x.eigen_coords()), 1e-15);
  const TorusLeafPoint ys = sys.translate(x, v2(0.02, 0.0));
  const TorusLeafPoint yu = sys.translate(x, v2(0.0, 0.02));
  EXPECT_LT(inf_norm(sys.bracket(x, ys, 0.05).eigen_coords() - ys.eigen_coords()), 1e-12);
  EXPECT_LT(inf_norm(sys.bracket(x, yu, 0.05).eigen_coords() - x.eigen_coords()), 1e-12);
}

TEST(TorusSystem, LiftAndEigenCoordinatesAgree) {
  const TorusSystem sys(IntMatrix::parse(hlab::testing::kCubic));
  for (std::uint64_t i = 0; i < 100; ++i) {
    CounterRng rng(3, i);
    const TorusLeafPoint x = random_torus_point(sys, rng);
    EXPECT_LT(inf_norm(sys.splitting().basis * x.eigen_coords() - x.lift()), 1e-12);
    const Vec t = x.torus_point();
    for (Eigen::Index k = 0; k < t.size(); ++k) {
      EXPECT_GE(t[k], 0.0);
      EXPECT_LT(t[k], 1.0);
      const double shift = x.lift()[k] - t[k];
      EXPECT_EQ(shift, std::round(shift));
    }
  }
}

TEST(TorusProperty, BracketIsEquivariant) {
  for (const char* m : {hlab::testing::kCatMap, hlab::testing::kCubic}) {
    const TorusSystem sys(IntMatrix::parse(m));
    for (std::uint64_t i = 0; i < 500; ++i) {
      CounterRng rng(21, i);
      const TorusLeafPoint x = random_torus_point(sys, rng);
      Vec d(static_cast<Eigen::Index>(sys.dim()));
      for (Eigen::Index k = 0; k < d.size(); ++k) d[k] = rng.uniform(-0.01, 0.01);
      const TorusLeafPoint y = sys.translate(x, d);
      const TorusLeafPoint lhs = sys.iterate(sys.bracket(x, y, 1.0), 1);
      const TorusLeafPoint rhs = sys.bracket(sys.iterate(x, 1), sys.iterate(y, 1), 1.0);
      const Vec w = sys.splitting().basis * (lhs.eigen_coords() - rhs.eigen_coords());
      Vec r = w;
      for (Eigen::Index k = 0; k < r.size(); ++k) r[k] -= std::round(w[k]);
      EXPECT_LT(inf_norm(r), 1e-10) << m << " sample " << i;
    }
  }
}

TEST(TorusProperty, BracketConvergesForwardAndBackward) {
  const TorusSystem sys(IntMatrix::parse(hlab::testing::kCatMap));
  const RhoGauge gauge(sys.splitting());
  for (std::uint64_t i = 0; i < 200; ++i) {
    CounterRng rng(22, i);
    const TorusLeafPoint x = random_torus_point(sys, rng);
    const TorusLeafPoint y = sys.translate(x, v2(rng.uniform(-0.03, 0.03), rng.uniform(-0.03, 0.03)));
    const TorusLeafPoint z = sys.bracket(x, y, 0.05);
    const double s0 = gauge.of_eigen(sys.leaf_displacement(x, z));
    const double u0 = gauge.of_eigen(sys.leaf_displacement(y, z));
    for (int n = 1; n <= 40; ++n) {
      const double sn = gauge.of_eigen(sys.leaf_displacement(sys.iterate(x, n), sys.iterate(z, n)));
      const double un = gauge.of_eigen(sys.leaf_displacement(sys.iterate(y, -n), sys.iterate(z, -n)));
      EXPECT_LE(rel_err(sn, std::pow(sys.lambda(), -n) * s0), 1e-10);
      EXPECT_LE(rel_err(un, std::pow(sys.lambda(), -n) * u0), 1e-10);
    }
  }
}
