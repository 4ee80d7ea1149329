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

#include "holonomy_lab/conformal_structure.hpp"

#include <cmath>
#include <string>

#include "holonomy_lab/error.hpp"

namespace hlab {

TorusConformalStructure::TorusConformalStructure(const TorusSystem& system, double xi, double delta0)
    : system_(&system), gauge_(system.splitting()), xi_(xi), delta0_(delta0) {
  if (!(xi > 0.0) || !(delta0 > 0.0)) throw Error(ErrorCode::invalid_argument, "xi and delta0 must be positive");
}

double TorusConformalStructure::base_distance(const TorusLeafPoint& x, const TorusLeafPoint& y) const {
  return gauge_.of_eigen(system_->local_displacement(x, y));
}

TorusLeafDistance TorusConformalStructure::leaf_distance(const TorusLeafPoint& y, const TorusLeafPoint& z,
                                                         Leaf direction) const {
  const Vec d = system_->leaf_displacement(y, z);
  const double scale = std::max(1.0, std::max(y.eigen_coords().lpNorm<Eigen::Infinity>(), d.lpNorm<Eigen::Infinity>()));
  if (system_->off_bundle(d, direction) > 1e-9 * scale) {
    throw Error(ErrorCode::not_same_leaf, std::string("points are not on one ") + leaf_name(direction) + " leaf");
  }
  const int sign = direction == Leaf::stable ? 1 : -1;
  const Vec along = system_->bundle_part(d, direction);
  int n = 0;
  while (gauge_.of_eigen(system_->scale(along, sign * n)) > xi_) {
    ++n;
    if (n > system_->horizon()) {
      throw Error(ErrorCode::horizon_exceeded, "leaf pair does not enter the xi-local leaf within the horizon");
    }
  }
  auto renormalized = [&](int k) {
    const double d_k = base_distance(system_->iterate(y, sign * k), system_->iterate(z, sign * k));
    return std::pow(lambda(), k) * d_k;
  };
  TorusLeafDistance out;
  out.n = n;
  out.value = renormalized(n);
  if (n + 1 <= system_->horizon()) {
    const double next = renormalized(n + 1);
    out.drift = out.value > 0.0 ? std::abs(next - out.value) / out.value : std::abs(next);
  }
  return out;
}

ShiftConformalStructure::ShiftConformalStructure(const ShiftSpace& space, long horizon)
    : space_(&space), horizon_(horizon) {}

ShiftLeafDistance ShiftConformalStructure::leaf_distance(const ShiftPoint& y, const ShiftPoint& z,
                                                         Leaf direction) const {
  const long n = n_first_iterate(y, z, direction);
  if (n > horizon_) throw Error(ErrorCode::horizon_exceeded, "n(y,z) = " + std::to_string(n));
  const long k = direction == Leaf::stable ? n : -n;
  ShiftLeafDistance out;
  out.n = n;
  out.value = space_->lambda_power(-n) * base_distance(shift_iterate(y, k), shift_iterate(z, k));
  return out;
}

namespace {

double piece_term(const RhoGauge& gauge, double dt, const Vec& d) { return dt * gauge.of_eigen(d / dt); }

}  // namespace

double rho_length_sum(const RhoGauge& gauge, const LeafCurve& curve) {
  double total = 0.0;
  const auto& b = curve.breakpoints();
  for (std::size_t i = 0; i < curve.piece_count(); ++i) total += piece_term(gauge, b[i + 1] - b[i], curve.pieces()[i]);
  return total;
}

double curve_rho_length(const RhoGauge& gauge, const LeafCurve& curve) {
  if (curve.degenerate()) throw Error(ErrorCode::degenerate_curve, "every piece of the curve is zero");
  return rho_length_sum(gauge, curve);
}

Rational curve_rho_length_exact(const RhoGauge& gauge, const LeafCurve& curve) {
  if (curve.degenerate()) throw Error(ErrorCode::degenerate_curve, "every piece of the curve is zero");
  Rational total = 0;
  const auto& b = curve.breakpoints();
  for (std::size_t i = 0; i < curve.piece_count(); ++i) {
    total += Rational(piece_term(gauge, b[i + 1] - b[i], curve.pieces()[i]));
  }
  return total;
}

double partition_length_estimate(const TorusConformalStructure& cs, const LeafCurve& curve, int level) {
  if (level < 0 || level > 20) throw Error(ErrorCode::invalid_argument, "refinement level must be in [0, 20]");
  const long pieces = 1L << level;
  const double a = curve.begin();
  const double span = curve.end() - a;
  double total = 0.0;
  TorusLeafPoint prev = curve.at(a);
  for (long i = 1; i <= pieces; ++i) {
    const double t = i == pieces ? curve.end() : a + span * static_cast<double>(i) / static_cast<double>(pieces);
    TorusLeafPoint next = curve.at(t);
    total += cs.leaf_distance(prev, next, curve.leaf()).value;
    prev = std::move(next);
  }
  return total;
}

double stable_threshold_param(const TorusConformalStructure& cs, const LeafCurve& curve, double start, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::invalid_argument, "threshold must be positive");
  const TorusLeafPoint origin = curve.at(start);
  auto dist = [&](double t) { return cs.leaf_distance(origin, curve.at(t), curve.leaf()).value; };
  if (dist(curve.end()) < delta) {
    throw Error(ErrorCode::remainder_short, "remaining curve is shorter than the threshold");
  }
  constexpr int kSubsamples = 32;
  const auto& b = curve.breakpoints();
  double lo = start;
  double hi = curve.end();
  bool found = false;
  for (std::size_t i = 0; i + 1 < b.size() && !found; ++i) {
    if (b[i + 1] <= start) continue;
    const double p0 = std::max(start, b[i]);
    const double p1 = b[i + 1];
    for (int j = 1; j <= kSubsamples; ++j) {
      const double t = j == kSubsamples ? p1 : p0 + (p1 - p0) * j / kSubsamples;
      if (dist(t) >= delta) {
        hi = t;
        found = true;
        break;
      }
      lo = t;
    }
  }
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (dist(mid) >= delta ? hi : lo) = mid;
  }
  return dist(hi) == delta ? hi : lo;
}

}  // namespace hlab
