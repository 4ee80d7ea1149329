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

#include <cmath>
#include <numbers>

#include "holonomy_lab/spectrum.hpp"

namespace hlab::testing {

inline const char* kCatMap = "2,1;1,1";
// Companion matrix of t^3 - t^2 - 2t + 1.
inline const char* kCubic = "0,1,0;0,0,1;-1,2,1";

// Roots of t^3 - t^2 - 2t + 1 are 2cos(pi/7), 2cos(3pi/7), 2cos(5pi/7).
inline double cubic_root(int k) { return 2.0 * std::cos(k * std::numbers::pi / 7.0); }

inline double golden_lambda() { return (3.0 + std::sqrt(5.0)) / 2.0; }

inline double rel_err(double measured, double expected) {
  if (expected == 0.0) return std::abs(measured);
  return std::abs(measured - expected) / std::abs(expected);
}

}  // namespace hlab::testing
