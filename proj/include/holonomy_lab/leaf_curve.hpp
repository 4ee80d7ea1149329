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

#include <vector>

#include "holonomy_lab/torus_system.hpp"

namespace hlab {

/// Piecewise-linear curve inside one stable or unstable leaf of a torus
/// system, constant speed on each piece. Piece displacements are held in
/// eigen coordinates and lie in the curve's bundle. The system must outlive
/// the curve.
class LeafCurve {
 public:
  /// Single piece on [0,1].
  static LeafCurve segment(const TorusSystem& system, Leaf leaf, const TorusLeafPoint& anchor,
                           const Vec& eigen_displacement);
  /// breakpoints t_0 < ... < t_m, one displacement per piece.
  static LeafCurve polyline(const TorusSystem& system, Leaf leaf, const TorusLeafPoint& anchor,
                            std::vector<double> breakpoints, std::vector<Vec> eigen_displacements);
  /// Curve through the given nodes at the given parameters. Displacements
  /// between consecutive nodes must lie in the bundle within `tolerance`
  /// (relative to the node scale); they are projected onto it.
  static LeafCurve from_nodes(const TorusSystem& system, Leaf leaf, const std::vector<TorusLeafPoint>& nodes,
                              std::vector<double> params, double tolerance = 1e-9);

  Leaf leaf() const noexcept { return leaf_; }
  const TorusSystem& system() const noexcept { return *system_; }
  const TorusLeafPoint& anchor() const noexcept { return anchor_; }
  const std::vector<double>& breakpoints() const noexcept { return breaks_; }
  const std::vector<Vec>& pieces() const noexcept { return pieces_; }
  std::size_t piece_count() const noexcept { return pieces_.size(); }
  double begin() const noexcept { return breaks_.front(); }
  double end() const noexcept { return breaks_.back(); }

  TorusLeafPoint at(double t) const;
  TorusLeafPoint end_point() const { return at(end()); }

  /// gamma restricted to [a, c], keeping the original parameters.
  LeafCurve restricted(double a, double c) const;
  /// f^k o gamma.
  LeafCurve iterated(int k) const;

  bool degenerate() const;

 private:
  LeafCurve(const TorusSystem& system, Leaf leaf, TorusLeafPoint anchor, std::vector<double> breaks,
            std::vector<Vec> pieces);
  std::size_t piece_index(double t) const;

  const TorusSystem* system_;
  Leaf leaf_;
  TorusLeafPoint anchor_;
  std::vector<double> breaks_;
  std::vector<Vec> pieces_;
  std::vector<Vec> cumulative_;  // displacement from anchor at each breakpoint
};

}  // namespace hlab
