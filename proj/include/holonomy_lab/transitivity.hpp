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

// Transitivity witnesses z in W^s(x) cap W^u(y) on hyperbolic tori, with
// forward and backward decay tables.

#pragma once

#include <vector>

#include "holonomy_lab/torus_system.hpp"

namespace hlab {

struct DecayRow {
  int n = 0;
  double forward_gauge = 0.0;   // rho(f^n z - f^n x)
  double backward_gauge = 0.0;  // rho(f^-n z - f^-n y)
  double expected = 0.0;        // lambda^-n
  double forward_error = 0.0;   // relative to lambda^-n times the n=0 value
  double backward_error = 0.0;
};

struct TransitivityWitness {
  TorusLeafPoint z;
  Vec offset;          // integer vector m with z in W^u(y + m)
  Vec stable_part;     // eigen coordinates of z - x
  Vec unstable_part;   // eigen coordinates of z - (y + m)
  double gauge = 0.0;  // max of the two gauges, minimized over m
  std::vector<DecayRow> table;
  double max_error = 0.0;
  bool pass = true;
};

/// z = x + P_s(w) with w the eigen coordinates of y + m - x, for the offset
/// m minimizing rho(w) (ties to the lexicographically smallest y - x - m
/// offset). Decay is certified at relative error `tolerance`. Throws
/// horizon_exceeded if n_max exceeds the horizon.
TransitivityWitness transitivity_witness(const TorusSystem& system, const TorusLeafPoint& x, const TorusLeafPoint& y,
                                         int n_max, double tolerance = 1e-9);

}  // namespace hlab
