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

// Conformal structures (d^s, d^u) built from a conformal base distance, on
// the torus (rho gauge, xi = 0.1) and on the shift (lambda^-N, xi = 1/lambda),
// together with stable/unstable lengths of leaf curves.

#pragma once

#include "holonomy_lab/leaf_curve.hpp"
#include "holonomy_lab/rho_gauge.hpp"
#include "holonomy_lab/shift_system.hpp"

namespace hlab {

struct TorusLeafDistance {
  double value = 0.0;
  int n = 0;           // first iterate entering the xi-local leaf
  double drift = 0.0;  // relative change of the value at n+1
};

class TorusConformalStructure {
 public:
  explicit TorusConformalStructure(const TorusSystem& system, double xi = 0.1, double delta0 = 0.05);

  const TorusSystem& system() const noexcept { return *system_; }
  const RhoGauge& gauge() const noexcept { return gauge_; }
  double xi() const noexcept { return xi_; }
  double delta0() const noexcept { return delta0_; }
  double lambda() const noexcept { return system_->lambda(); }

  /// rho of the nearest-lift displacement.
  double base_distance(const TorusLeafPoint& x, const TorusLeafPoint& y) const;
  /// lambda^n d(f^n y, f^n z) (stable) or lambda^n d(f^-n y, f^-n z) (unstable).
  /// Throws not_same_leaf, horizon_exceeded.
  TorusLeafDistance leaf_distance(const TorusLeafPoint& y, const TorusLeafPoint& z, Leaf direction) const;

 private:
  const TorusSystem* system_;
  RhoGauge gauge_;
  double xi_;
  double delta0_;
};

struct ShiftLeafDistance {
  Rational value;
  long n = 0;
};

class ShiftConformalStructure {
 public:
  explicit ShiftConformalStructure(const ShiftSpace& space, long horizon = 64);

  const ShiftSpace& space() const noexcept { return *space_; }
  Rational xi() const { return space_->lambda_power(1); }
  const Rational& lambda() const noexcept { return space_->lambda(); }

  Rational base_distance(const ShiftPoint& x, const ShiftPoint& y) const { return hlab::base_distance(*space_, x, y); }
  /// Exact d^s / d^u. Throws not_same_leaf, horizon_exceeded.
  ShiftLeafDistance leaf_distance(const ShiftPoint& y, const ShiftPoint& z, Leaf direction) const;

 private:
  const ShiftSpace* space_;
  long horizon_;
};

/// sum over pieces of dt * rho(d / dt); zero for a degenerate curve.
double rho_length_sum(const RhoGauge& gauge, const LeafCurve& curve);
/// As rho_length_sum; throws degenerate_curve when every piece is zero.
double curve_rho_length(const RhoGauge& gauge, const LeafCurve& curve);
/// Exact rational sum of the per-piece double terms.
Rational curve_rho_length_exact(const RhoGauge& gauge, const LeafCurve& curve);

/// Sum of d^s (or d^u) over the dyadic partition of the curve domain at the
/// given level (0..20).
double partition_length_estimate(const TorusConformalStructure& cs, const LeafCurve& curve, int level);

/// Least parameter alpha > start with leaf distance from curve(start) equal
/// to delta. Throws remainder_short if the end of the curve stays below delta.
double stable_threshold_param(const TorusConformalStructure& cs, const LeafCurve& curve, double start, double delta);

}  // namespace hlab
