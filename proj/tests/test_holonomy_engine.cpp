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

#include <cmath>
#include <functional>

#include "holonomy_lab/error.hpp"
#include "holonomy_lab/holonomy_engine.hpp"
#include "test_support.hpp"

using namespace hlab;
using hlab::testing::golden_lambda;
using hlab::testing::rel_err;

namespace {

const TorusSystem& cat() {
  static const TorusSystem s(IntMatrix::parse(hlab::testing::kCatMap));
  return s;
}

const TorusSystem& cubic() {
  static const TorusSystem s(IntMatrix::parse(hlab::testing::kCubic));
  return s;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ok;
}

// Eigen vector on one line whose gauge is `gauge`.
Vec on_line(const TorusSystem& sys, Leaf leaf, int line, double gauge) {
  const auto& s = sys.splitting();
  const std::size_t col = s.first_column(leaf) + static_cast<std::size_t>(line);
  Vec d = Vec::Zero(static_cast<Eigen::Index>(sys.dim()));
  d[static_cast<Eigen::Index>(col)] = std::pow(gauge, 1.0 / s.exponents[col]);
  return d;
}

struct Curves {
  LeafCurve gu;
  LeafCurve gs;
};

Curves curves(const TorusSystem& sys, const TorusLeafPoint& anchor, double lu, double ls, int uline = 0) {
  return {LeafCurve::segment(sys, Leaf::unstable, anchor, on_line(sys, Leaf::unstable, uline, lu)),
          LeafCurve::segment(sys, Leaf::stable, anchor, on_line(sys, Leaf::stable, 0, ls))};
}

TorusLeafPoint origin(const TorusSystem& sys) { return sys.point(Vec::Zero(static_cast<Eigen::Index>(sys.dim()))); }

int expected_stages(double lambda, double size, double delta) {
  if (size <= delta) return 1;
  return 1 + static_cast<int>(std::ceil((size - delta) / (delta / lambda) - 1e-9));
}

double max_node_gap(const SURectangle& a, const SURectangle& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.nodes.size(); ++k) {
    m = std::max(m, (a.nodes[k].eigen_coords() - b.nodes[k].eigen_coords()).lpNorm<Eigen::Infinity>());
  }
  return m;
}

}  // namespace

TEST(LocalRectangle, CatMapRowsAreParallel) {
  const TorusConformalStructure cs(cat());
  const Curves c = curves(cat(), origin(cat()), 0.05, 0.05);
  const SURectangle g = local_rectangle(cs, c.gu, c.gs, 16, 16, 0.05, 0.1);
  ASSERT_EQ(g.nu(), 17u);
  ASSERT_EQ(g.ns(), 17u);
  const HolonomyReport rep = verify_rectangle(cs, g, 0.1);
  EXPECT_TRUE(rep.pass) << rep.failure;
  for (double l : rep.row_lengths) {
    EXPECT_GE(l, 0.045);
    EXPECT_LE(l, 0.055);
    EXPECT_LE(rel_err(l, 0.05), 1e-12);
  }
  EXPECT_LE(rep.max_residual, 1e-12);
  for (std::size_t j = 0; j < g.ns(); ++j) {
    EXPECT_LE((g.node(0, j).eigen_coords() - c.gs.at(g.stable_params[j]).eigen_coords()).norm(), 1e-15);
  }
  for (std::size_t i = 0; i < g.nu(); ++i) {
    EXPECT_LE((g.node(i, 0).eigen_coords() - c.gu.at(g.unstable_params[i]).eigen_coords()).norm(), 1e-15);
  }
}

TEST(LocalRectangle, DegenerateCurves) {
  const TorusConformalStructure cs(cat());
  const Curves c = curves(cat(), origin(cat()), 0.05, 0.05);
  const LeafCurve point_u = LeafCurve::segment(cat(), Leaf::unstable, origin(cat()), Vec::Zero(2));
  const LeafCurve point_s = LeafCurve::segment(cat(), Leaf::stable, origin(cat()), Vec::Zero(2));
  const SURectangle col = local_rectangle(cs, point_u, c.gs, 16, 16, 0.05, 0.1);
  ASSERT_EQ(col.nu(), 1u);
  ASSERT_EQ(col.ns(), 17u);
  for (std::size_t j = 0; j < col.ns(); ++j) {
    EXPECT_EQ(col.node(0, j).eigen_coords(), c.gs.at(col.stable_params[j]).eigen_coords());
  }
  const SURectangle row = local_rectangle(cs, c.gu, point_s, 16, 16, 0.05, 0.1);
  ASSERT_EQ(row.ns(), 1u);
  ASSERT_EQ(row.nu(), 17u);
  for (std::size_t i = 0; i < row.nu(); ++i) {
    EXPECT_EQ(row.node(i, 0).eigen_coords(), c.gu.at(row.unstable_params[i]).eigen_coords());
  }
}

TEST(LocalRectangle, RejectsOversizedCurves) {
  const TorusConformalStructure cs(cat());
  const Curves long_u = curves(cat(), origin(cat()), 0.06, 0.05);
  EXPECT_EQ(code_of([&] { (void)local_rectangle(cs, long_u.gu, long_u.gs, 4, 4, 0.05, 0.1); }), ErrorCode::too_large);
  const Curves long_s = curves(cat(), origin(cat()), 0.05, 0.06);
  EXPECT_EQ(code_of([&] { (void)local_rectangle(cs, long_s.gu, long_s.gs, 4, 4, 0.05, 0.1); }), ErrorCode::too_large);
  EXPECT_EQ(code_of([&] { (void)local_rectangle(cs, long_s.gs, long_s.gu, 4, 4, 0.05, 0.1); }),
            ErrorCode::invalid_argument);
}

namespace {

// Two abutting local rectangles along one stable curve of size 0.05.
std::pair<SURectangle, SURectangle> abutting(const TorusConformalStructure& cs) {
  const TorusSystem& sys = cs.system();
  const Curves c = curves(sys, origin(sys), 0.05, 0.05);
  const auto tgrid = curve_grid(c.gu, 16);
  std::vector<double> lower;
  std::vector<double> upper;
  for (int j = 0; j <= 16; ++j) {
    const double s = j / 16.0;
    if (j <= 8) lower.push_back(s);
    if (j >= 8) upper.push_back(s);
  }
  const SURectangle g1 = local_rectangle(cs, c.gu, c.gs, tgrid, lower, 0.05, 0.1, 1);
  std::vector<TorusLeafPoint> top;
  for (std::size_t i = 0; i < g1.nu(); ++i) top.push_back(g1.node(i, g1.ns() - 1));
  const LeafCurve u2 = LeafCurve::from_nodes(sys, Leaf::unstable, top, tgrid);
  const SURectangle g2 = local_rectangle(cs, u2, c.gs, tgrid, upper, 0.05, 0.1, 2);
  return {g1, g2};
}

}  // namespace

TEST(GlueRectangles, AbuttingStagesStayConsistent) {
  const TorusConformalStructure cs(cat());
  const auto [g1, g2] = abutting(cs);
  const SURectangle g = glue_rectangles(g1, g2);
  EXPECT_EQ(g.ns(), 17u);
  EXPECT_EQ(g.provenance, (std::vector<int>{1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2}));
  const HolonomyReport rep = verify_rectangle(cs, g, 0.1);
  EXPECT_TRUE(rep.pass) << rep.failure;
  EXPECT_LE(rep.max_residual, 1e-9);
  EXPECT_EQ(rep.stages, 2);
}

TEST(GlueRectangles, RejectsPerturbedBoundary) {
  const TorusConformalStructure cs(cat());
  auto [g1, g2] = abutting(cs);
  g2.node(5, 0) = cat().translate(g2.node(5, 0), (Vec(2) << 1e-3, 0.0).finished());
  EXPECT_EQ(code_of([&] { (void)glue_rectangles(g1, g2); }), ErrorCode::boundary_mismatch);
}

TEST(GlueRectangles, DegenerateStripIsIdentity) {
  const TorusConformalStructure cs(cat());
  const auto [g1, g2] = abutting(cs);
  SURectangle strip;
  strip.unstable_params = g1.unstable_params;
  strip.stable_params = {g1.stable_params.back()};
  for (std::size_t i = 0; i < g1.nu(); ++i) strip.nodes.push_back(g1.node(i, g1.ns() - 1));
  const SURectangle g = glue_rectangles(g1, strip);
  EXPECT_EQ(g.stable_params, g1.stable_params);
  EXPECT_EQ(g.provenance, g1.provenance);
  EXPECT_EQ(max_node_gap(g, g1), 0.0);
  EXPECT_EQ(glue_rectangles(SURectangle{}, g1).nodes.size(), g1.nodes.size());
}

TEST(ExtendHolonomy, CatMapSeventeenStages) {
  const TorusConformalStructure cs(cat());
  const Curves c = curves(cat(), origin(cat()), 0.05, 0.35);
  const auto [g, rep] = extend_holonomy(cs, c.gu, c.gs, HolonomyConfig{});
  EXPECT_EQ(rep.stages, expected_stages(golden_lambda(), 0.35, 0.05));
  EXPECT_EQ(rep.stages, 17);
  EXPECT_TRUE(rep.pass) << rep.failure;
  EXPECT_LE(rep.final_ratio, 1.1);
  EXPECT_GE(rep.min_ratio, 0.9);
  EXPECT_LE(rep.max_ratio, 1.1);
  EXPECT_LE(rep.max_residual, 1e-9);
  ASSERT_EQ(rep.records.size(), 17u);
  EXPECT_NEAR(rep.records[0].alpha_end, 0.05 / 0.35, 1e-12);
  for (std::size_t i = 1; i < rep.records.size(); ++i) {
    EXPECT_GT(rep.records[i].alpha_end, rep.records[i].alpha_begin);
    EXPECT_EQ(rep.records[i].alpha_begin, rep.records[i - 1].alpha_end);
    EXPECT_GE(rep.records[i].k, 1);
  }
  EXPECT_EQ(rep.records.back().alpha_end, 1.0);
  EXPECT_EQ(*std::max_element(g.provenance.begin(), g.provenance.end()), 17);
}

TEST(ExtendHolonomy, ShortStableCurveIsOneLocalRectangle) {
  const TorusConformalStructure cs(cat());
  const Curves c = curves(cat(), origin(cat()), 0.05, 0.04);
  const auto [g, rep] = extend_holonomy(cs, c.gu, c.gs, HolonomyConfig{});
  EXPECT_EQ(rep.stages, 1);
  EXPECT_TRUE(rep.pass);
  for (std::size_t j = 0; j < g.ns(); ++j) {
    for (std::size_t i = 0; i < g.nu(); ++i) {
      const TorusLeafPoint z = cat().bracket(c.gu.at(g.unstable_params[i]), c.gs.at(g.stable_params[j]), 0.1);
      EXPECT_LE((z.eigen_coords() - g.node(i, j).eigen_coords()).norm(), 1e-15);
    }
  }
}

TEST(ExtendHolonomy, CubicSystemBothUnstableLines) {
  const TorusConformalStructure cs(cubic());
  for (int line : {0, 1}) {
    const Curves c = curves(cubic(), origin(cubic()), 0.05, 0.35, line);
    const auto [g, rep] = extend_holonomy(cs, c.gu, c.gs, HolonomyConfig{});
    EXPECT_EQ(rep.stages, expected_stages(cubic().lambda(), 0.35, 0.05)) << line;
    EXPECT_EQ(rep.stages, 15);
    EXPECT_TRUE(rep.pass) << rep.failure;
    EXPECT_LE(rep.max_ratio, 1.1);
    EXPECT_GE(rep.min_ratio, 0.9);
    EXPECT_LE(rep.max_residual, 1e-9);
  }
}

TEST(ExtendHolonomy, LongUnstableCurveIsPreIterated) {
  const TorusConformalStructure cs(cat());
  const Curves c = curves(cat(), origin(cat()), 0.05 * golden_lambda() * golden_lambda(), 0.35 / (golden_lambda() * golden_lambda()));
  const auto [g, rep] = extend_holonomy(cs, c.gu, c.gs, HolonomyConfig{});
  EXPECT_EQ(rep.pre_iterations, 2);
  EXPECT_EQ(rep.stages, 17);
  EXPECT_TRUE(rep.pass);
}

TEST(ExtendHolonomy, RejectsBadParameters) {
  const TorusConformalStructure cs(cat());
  const Curves c = curves(cat(), origin(cat()), 0.05, 0.35);
  HolonomyConfig hc;
  hc.eps = 2.0;
  EXPECT_EQ(code_of([&] { (void)extend_holonomy(cs, c.gu, c.gs, hc); }), ErrorCode::invalid_argument);
  const TorusSystem tight(IntMatrix::parse(hlab::testing::kCatMap), 3);
  const TorusConformalStructure cst(tight);
  const Curves far = curves(tight, origin(tight), 0.05 * std::pow(golden_lambda(), 5), 0.01);
  EXPECT_EQ(code_of([&] { (void)extend_holonomy(cst, far.gu, far.gs, HolonomyConfig{}); }),
            ErrorCode::horizon_exceeded);
}

TEST(HolonomyProperty, CommutesWithTheMap) {
  const TorusConformalStructure cs(cat());
  HolonomyConfig hc;
  hc.unstable_grid = 8;
  hc.stable_grid = 8;
  for (std::uint64_t i = 0; i < 6; ++i) {
    CounterRng rng(61, i);
    const TorusLeafPoint x = random_torus_point(cat(), rng);
    const Curves c = curves(cat(), x, rng.uniform(0.02, 0.05), rng.uniform(0.05, 0.3));
    const auto [g, rep] = extend_holonomy(cs, c.gu, c.gs, hc);
    const int k = 1 + static_cast<int>(i % 3);
    const auto [gk, repk] = extend_holonomy(cs, c.gu.iterated(k), c.gs.iterated(k), hc);
    EXPECT_EQ(repk.pre_iterations, k);
    EXPECT_EQ(repk.stages, rep.stages);
    ASSERT_EQ(gk.nodes.size(), g.nodes.size());
    EXPECT_LE(max_node_gap(iterate_rectangle(cat(), gk, -k), g), 1e-9) << i;
  }
}

TEST(HolonomyProperty, CommutesWithTranslations) {
  const TorusConformalStructure cs(cat());
  HolonomyConfig hc;
  hc.unstable_grid = 8;
  hc.stable_grid = 8;
  const Curves c0 = curves(cat(), origin(cat()), 0.05, 0.2);
  const auto [g0, rep0] = extend_holonomy(cs, c0.gu, c0.gs, hc);
  for (std::uint64_t i = 0; i < 6; ++i) {
    CounterRng rng(62, i);
    const TorusLeafPoint x = random_torus_point(cat(), rng);
    const Curves c = curves(cat(), x, 0.05, 0.2);
    const auto [g, rep] = extend_holonomy(cs, c.gu, c.gs, hc);
    ASSERT_EQ(g.nodes.size(), g0.nodes.size());
    double gap = 0.0;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      const Vec d = g.nodes[k].eigen_coords() - g0.nodes[k].eigen_coords() - x.eigen_coords();
      gap = std::max(gap, d.lpNorm<Eigen::Infinity>());
    }
    EXPECT_LE(gap, 1e-12);
    EXPECT_EQ(rep.stages, rep0.stages);
  }
}

TEST(HolonomyProperty, RowsStayWithinEpsilonOnExponentOneSystems) {
  const TorusConformalStructure cs(cat());
  HolonomyConfig hc;
  hc.unstable_grid = 6;
  hc.stable_grid = 6;
  for (std::uint64_t i = 0; i < 20; ++i) {
    CounterRng rng(63, i);
    hc.eps = rng.uniform(0.02, 0.5);
    hc.delta = rng.uniform(0.01, 0.05);
    const double ls = rng.uniform(0.0, 0.4);
    const Curves c = curves(cat(), random_torus_point(cat(), rng), hc.delta * rng.uniform(0.1, 1.0), ls);
    const auto [g, rep] = extend_holonomy(cs, c.gu, c.gs, hc);
    EXPECT_TRUE(rep.pass) << i << ": " << rep.failure;
    EXPECT_LE(rep.max_ratio, 1.0 + hc.eps);
    EXPECT_GE(rep.min_ratio, 1.0 - hc.eps);
    EXPECT_LE(rep.stages, expected_stages(golden_lambda(), ls, hc.delta));
    for (std::size_t r = 1; r < rep.records.size(); ++r) {
      EXPECT_GT(rep.records[r].alpha_end, rep.records[r - 1].alpha_end);
    }
  }
}

TEST(VerifyRectangle, DetectsInjectedFault) {
  const TorusConformalStructure cs(cat());
  const Curves c = curves(cat(), origin(cat()), 0.05, 0.05);
  SURectangle g = local_rectangle(cs, c.gu, c.gs, 8, 8, 0.05, 0.1);
  ASSERT_TRUE(verify_rectangle(cs, g, 0.1).pass);
  g.node(3, 4) = cat().translate(g.node(3, 4), (Vec(2) << 1e-4, 1e-4).finished());
  const HolonomyReport rep = verify_rectangle(cs, g, 0.1);
  EXPECT_FALSE(rep.pass);
  EXPECT_EQ(rep.witness, "node (3,4)");
  EXPECT_GE(rep.max_residual, 0.99e-4);
}

TEST(VerifyRectangle, SingleNodePassesVacuously) {
  const TorusConformalStructure cs(cat());
  SURectangle g;
  g.unstable_params = {0.0};
  g.stable_params = {0.0};
  g.nodes = {origin(cat())};
  const HolonomyReport rep = verify_rectangle(cs, g, 0.1);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.max_residual, 0.0);
  EXPECT_TRUE(verify_rectangle(cs, SURectangle{}, 0.1).pass);
}

TEST(PseudoIsometry, BoundAndScaleIndex) {
  EXPECT_DOUBLE_EQ(pseudo_isometry_bound(2.0, 6), 1.0 / 15.0);
  EXPECT_NEAR(pseudo_isometry_bound(2.0, 6), 0.0667, 1e-4);
  EXPECT_TRUE(std::isinf(pseudo_isometry_bound(2.0, 2)));
  EXPECT_EQ(scale_index(2.0, 0.5, 0.5), 0);
  EXPECT_EQ(scale_index(2.0, 0.5, 0.5 / 64.0), 6);
  EXPECT_EQ(scale_index(2.0, 0.5, 0.5 / 64.0 * 0.99), 6);
  EXPECT_EQ(scale_index(2.0, 0.5, 0.5 / 64.0 * 1.01), 5);
  EXPECT_EQ(code_of([] { (void)scale_index(2.0, 0.5, 0.0); }), ErrorCode::invalid_argument);
}

TEST(PseudoIsometry, ScaleBracketProperty) {
  for (std::uint64_t i = 0; i < 1000; ++i) {
    CounterRng rng(64, i);
    const double lambda = rng.uniform(1.5, 4.0);
    const double xi = rng.uniform(0.01, 1.0);
    const double v = xi * std::pow(lambda, -rng.uniform(-2.0, 30.0));
    const long m = scale_index(lambda, xi, v);
    EXPECT_LT(xi * std::pow(lambda, -m - 1.0), v);
    EXPECT_LE(v, xi * std::pow(lambda, -static_cast<double>(m)));
  }
}

TEST(PseudoIsometry, ShiftSplicesAreExact) {
  const ShiftSpace space = ShiftSpace::full(2);
  const ShiftConformalStructure cs(space);
  const AuditReport r = pseudo_isometry_audit(cs, ShiftPoint::constant(space, 0), 2000, 7);
  EXPECT_TRUE(r.pass) << r.worst_witness;
  EXPECT_EQ(r.worst_value, 0.0);
  const ShiftSpace golden = ShiftSpace::parse("1,1;1,0");
  const ShiftConformalStructure gcs(golden);
  EXPECT_TRUE(pseudo_isometry_audit(gcs, ShiftPoint::constant(golden, 0), 2000, 7).pass);
}

TEST(PseudoIsometry, CatMapHolonomyIsIsometric) {
  const TorusConformalStructure cs(cat());
  const AuditReport r = pseudo_isometry_audit(cs, origin(cat()), 2000, 7);
  EXPECT_TRUE(r.pass) << r.worst_witness;
  EXPECT_LE(*r.worst_value, 1e-10);
  ASSERT_EQ(r.details.size(), 2u);
  EXPECT_EQ(r.details[0].first, "m0");
  EXPECT_EQ(pseudo_isometry_bound(cat().lambda(), static_cast<long>(r.details[0].second)), r.details[1].second);
  EXPECT_LT(r.details[1].second, 1.0);
}

TEST(PseudoIsometry, CalibratedDeltaOnTheCatMap) {
  const TorusConformalStructure cs(cat());
  EXPECT_DOUBLE_EQ(calibrate_delta(cs, 0.1, 2000, 1), 0.025);
}
