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

#include "holonomy_lab/leaf_curve.hpp"

#include <algorithm>
#include <cmath>

#include "holonomy_lab/error.hpp"

namespace hlab {

LeafCurve::LeafCurve(const TorusSystem& system, Leaf leaf, TorusLeafPoint anchor, std::vector<double> breaks,
                     std::vector<Vec> pieces)
    : system_(&system), leaf_(leaf), anchor_(std::move(anchor)), breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
  if (breaks_.size() < 2 || pieces_.size() + 1 != breaks_.size()) {
    throw Error(ErrorCode::invalid_argument, "a curve needs m+1 breakpoints for m pieces");
  }
  for (std::size_t i = 1; i < breaks_.size(); ++i) {
    if (!(breaks_[i] > breaks_[i - 1])) throw Error(ErrorCode::invalid_argument, "breakpoints must increase");
  }
  const auto n = static_cast<Eigen::Index>(system.dim());
  cumulative_.reserve(breaks_.size());
  cumulative_.push_back(Vec::Zero(n));
  for (auto& d : pieces_) {
    if (d.size() != n) throw Error(ErrorCode::invalid_argument, "piece dimension");
    const double off = system.off_bundle(d, leaf_);
    if (off > 1e-12 * std::max(1.0, d.lpNorm<Eigen::Infinity>())) {
      throw Error(ErrorCode::invalid_argument, std::string("piece leaves the ") + leaf_name(leaf_) + " bundle");
    }
    d = system.bundle_part(d, leaf_);
    cumulative_.push_back(cumulative_.back() + d);
  }
}

LeafCurve LeafCurve::segment(const TorusSystem& system, Leaf leaf, const TorusLeafPoint& anchor, const Vec& d) {
  return LeafCurve(system, leaf, anchor, {0.0, 1.0}, {d});
}

LeafCurve LeafCurve::polyline(const TorusSystem& system, Leaf leaf, const TorusLeafPoint& anchor,
                              std::vector<double> breakpoints, std::vector<Vec> displacements) {
  return LeafCurve(system, leaf, anchor, std::move(breakpoints), std::move(displacements));
}

LeafCurve LeafCurve::from_nodes(const TorusSystem& system, Leaf leaf, const std::vector<TorusLeafPoint>& nodes,
                                std::vector<double> params, double tolerance) {
  if (nodes.size() != params.size() || nodes.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "from_nodes needs matching nodes and parameters");
  }
  std::vector<Vec> pieces;
  pieces.reserve(nodes.size() - 1);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const Vec d = system.leaf_displacement(nodes[i - 1], nodes[i]);
    const double scale = std::max({1.0, nodes[i - 1].eigen_coords().lpNorm<Eigen::Infinity>()});
    if (system.off_bundle(d, leaf) > tolerance * scale) {
      throw Error(ErrorCode::not_same_leaf, std::string("nodes ") + std::to_string(i - 1) + " and " + std::to_string(i) +
                                                " are not on one " + leaf_name(leaf) + " leaf");
    }
    pieces.push_back(system.bundle_part(d, leaf));
  }
  return LeafCurve(system, leaf, nodes.front(), std::move(params), std::move(pieces));
}

std::size_t LeafCurve::piece_index(double t) const {
  if (t < begin() || t > end()) throw Error(ErrorCode::invalid_argument, "parameter outside the curve domain");
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  const auto i = static_cast<std::size_t>(it - breaks_.begin());
  return std::min(i == 0 ? 0 : i - 1, pieces_.size() - 1);
}

TorusLeafPoint LeafCurve::at(double t) const {
  const std::size_t i = piece_index(t);
  if (t == breaks_[i]) return system_->translate(anchor_, cumulative_[i]);
  if (t == breaks_[i + 1]) return system_->translate(anchor_, cumulative_[i + 1]);
  const double u = (t - breaks_[i]) / (breaks_[i + 1] - breaks_[i]);
  return system_->translate(anchor_, cumulative_[i] + u * pieces_[i]);
}

LeafCurve LeafCurve::restricted(double a, double c) const {
  if (!(a < c) || a < begin() || c > end()) throw Error(ErrorCode::invalid_argument, "bad restriction interval");
  std::vector<double> breaks{a};
  std::vector<Vec> pieces;
  const std::size_t first = piece_index(a);
  for (std::size_t i = first; i < pieces_.size() && breaks_[i] < c; ++i) {
    const double lo = std::max(a, breaks_[i]);
    const double hi = std::min(c, breaks_[i + 1]);
    if (!(hi > lo)) continue;
    const double span = breaks_[i + 1] - breaks_[i];
    if (lo == breaks_[i] && hi == breaks_[i + 1]) {
      pieces.push_back(pieces_[i]);
    } else {
      pieces.push_back(((hi - lo) / span) * pieces_[i]);
    }
    breaks.push_back(hi);
  }
  return LeafCurve(*system_, leaf_, at(a), std::move(breaks), std::move(pieces));
}

LeafCurve LeafCurve::iterated(int k) const {
  std::vector<Vec> pieces;
  pieces.reserve(pieces_.size());
  for (const auto& d : pieces_) pieces.push_back(system_->scale(d, k));
  return LeafCurve(*system_, leaf_, system_->iterate(anchor_, k), breaks_, std::move(pieces));
}

bool LeafCurve::degenerate() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Vec& d) { return d.isZero(0.0); });
}

}  // namespace hlab
