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

// Deterministic SVG: rectangles on the unit-square fundamental domain of a
// 2-torus, and decay tables on a log scale.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "holonomy_lab/holonomy_engine.hpp"
#include "holonomy_lab/transitivity.hpp"

namespace hlab {

using Point2 = std::array<double, 2>;
using Polyline2 = std::vector<Point2>;

/// Reduces a path in R^2 mod 1, splitting it wherever it crosses an integer
/// grid line. Each returned polyline lies in one copy of [0,1]^2.
std::vector<Polyline2> wrap_path(const std::vector<Point2>& lift_path);

/// Stable columns in class "stable", unstable rows in "unstable", grouped in
/// one colored band per construction stage; the outline in "boundary".
/// Throws Error(unsupported_dimension) unless the system is 2-D.
std::string render_rectangle_svg(const TorusSystem& system, const SURectangle& rectangle, const std::string& version);

/// log10 of the forward/backward gauges relative to n = 0 against -n log10(lambda).
std::string render_decay_svg(const TransitivityWitness& witness, double lambda, const std::string& version);

}  // namespace hlab
