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

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "holonomy_lab/audits.hpp"

namespace hlab {

/// Discretized s/u-rectangle g(t_i, s_j): rows (fixed s) are unstable
/// curves, columns (fixed t) stable curves. Stable parameters are those of
/// the generating stable curve, so g(0, s) = gamma_s(s).
struct SURectangle {
  std::vector<double> unstable_params;
  std::vector<double> stable_params;
  std::vector<TorusLeafPoint> nodes;  // nodes[j * nu + i] = g(t_i, s_j)
  std::vector<int> provenance;        // construction stage of each stable interval

  std::size_t nu() const noexcept { return unstable_params.size(); }
  std::size_t ns() const noexcept { return stable_params.size(); }
  bool empty() const noexcept { return nodes.empty(); }
  const TorusLeafPoint& node(std::size_t i, std::size_t j) const { return nodes[j * nu() + i]; }
  TorusLeafPoint& node(std::size_t i, std::size_t j) { return nodes[j * nu() + i]; }
};

/// `pieces` uniform cells of the curve domain merged with its breakpoints.
std::vector<double> curve_grid(const LeafCurve& curve, int pieces);

/// g(t, s) = [gamma_u(t), gamma_s(s)] on the given grids, with the
/// pseudo-isometry row and column checks at eps. Brackets use radius xi.
/// Throws too_large, pseudo_isometry_violated.
SURectangle local_rectangle(const TorusConformalStructure& cs, const LeafCurve& gamma_u, const LeafCurve& gamma_s,
                            const std::vector<double>& unstable_params, const std::vector<double>& stable_params,
                            double delta, double eps, int stage = 1);
SURectangle local_rectangle(const TorusConformalStructure& cs, const LeafCurve& gamma_u, const LeafCurve& gamma_s,
                            int unstable_grid, int stable_grid, double delta, double eps);

/// Stacks g2 on top of g1. Throws boundary_mismatch unless g2's first row
/// equals g1's last row within `tolerance` in eigen coordinates.
SURectangle glue_rectangles(const SURectangle& g1, const SURectangle& g2, double tolerance = 1e-10);

/// Maps every node by f^k.
SURectangle iterate_rectangle(const TorusSystem& system, const SURectangle& g, int k);

struct StageRecord {
  int index = 0;
  double alpha_begin = 0.0;
  double alpha_end = 0.0;
  double threshold = 0.0;
  int k = 0;                     // renormalization depth
  int j = 0;                     // unstable pieces
  double stable_height = 0.0;    // largest pushed-forward column d^s
  double row_ratio = 0.0;        // top row length / l^u(gamma_u)
  double certified_ratio = 0.0;  // sum of pulled-back piece bounds / l^u(gamma_u)
  double residual = 0.0;         // product-box uniqueness residual
};

struct HolonomyReport {
  bool pass = true;
  int stages = 0;
  int pre_iterations = 0;
  double eps = 0.0;
  double delta = 0.0;
  double base_length = 0.0;  // l^u(gamma_u)
  std::vector<StageRecord> records;
  std::vector<double> row_lengths;  // one per stable parameter
  std::vector<double> row_ratios;
  double final_ratio = 0.0;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double max_residual = 0.0;
  double max_column_excess = 0.0;  // max of column d^s / ((1+eps) boundary d^s)
  std::string failure;
  std::string witness;
};

struct HolonomyConfig {
  double delta = 0.05;
  double eps = 0.1;
  int unstable_grid = 16;
  int stable_grid = 16;
};

/// Globally extends the local holonomy along gamma_s: stage thresholds delta,
/// then delta/lambda through conjugation by f^-1, gluing, and per-stage
/// renormalization of the unstable length. Throws blow_up, horizon_exceeded,
/// too_large, pseudo_isometry_violated, boundary_mismatch.
std::pair<SURectangle, HolonomyReport> extend_holonomy(const TorusConformalStructure& cs, const LeafCurve& gamma_u,
                                                       const LeafCurve& gamma_s, const HolonomyConfig& config);

/// Corner consistency, leaf membership, row lengths and column bounds.
HolonomyReport verify_rectangle(const TorusConformalStructure& cs, const SURectangle& g, double eps);

/// 2 / (lambda^(m-1) - 2), +inf when the denominator is not positive.
double pseudo_isometry_bound(double lambda, long m);
/// Scale index m with xi lambda^(-m-1) < value <= xi lambda^-m.
long scale_index(double lambda, double xi, double value);

/// Holonomy distortion |1 - d(pi p, pi q) / d(p, q)| for pairs on plaques of
/// C_xi(center), half by stable and half by unstable holonomy, each checked
/// against the bound at its own scale index.
AuditReport pseudo_isometry_audit(const TorusConformalStructure& cs, const TorusLeafPoint& center, long sample_pairs,
                                  std::uint64_t seed);
AuditReport pseudo_isometry_audit(const ShiftConformalStructure& cs, const ShiftPoint& center, long sample_pairs,
                                  std::uint64_t seed);

/// min(xi/4, largest xi/4 * 2^-r whose pairs below it all distort by < eps).
double calibrate_delta(const TorusConformalStructure& cs, double eps, long samples = 10000, std::uint64_t seed = 1);

}  // namespace hlab
