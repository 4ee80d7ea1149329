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

// Experiment configuration: line-oriented key=value text. Later lines
// override earlier ones, so CLI flags are appended after the file.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hlab {

struct ExperimentConfig {
  std::optional<std::string> matrix;  // "2,1;1,1"
  std::optional<std::string> shift;   // "full2" or an adjacency matrix
  std::string lambda = "2";           // shift expansion factor, exact
  double xi = 0.1;
  double delta0 = 0.05;
  double eps = 0.1;
  std::optional<double> delta;  // calibrated when absent
  int unstable_grid = 16;
  int stable_grid = 16;
  int horizon = 64;
  long samples = 10000;
  std::uint64_t seed = 1;
  std::string out = "out";
  double stable_length = 0.35;
  std::optional<double> unstable_length;  // defaults to delta
  int stable_line = 0;
  int unstable_line = 0;
  int nmax = 30;
  long pairs = 100;

  /// Resolved system spec: the matrix, else the shift, else the cat map.
  bool is_shift() const { return shift.has_value(); }
  std::string matrix_or_default() const { return matrix.value_or("2,1;1,1"); }

  /// Every key in file order with its canonical value.
  std::vector<std::pair<std::string, std::string>> snapshot() const;
};

/// Parses key=value lines; '#' starts a comment, blank lines are skipped.
/// Throws Error(config_invalid) on unknown keys or malformed values.
ExperimentConfig parse_config(std::string_view text);

/// Checks positivity of tolerances and lambda^-1 (1 + eps) < 1 against the
/// system's lambda. Throws Error(config_invalid).
void validate_config(const ExperimentConfig& config, double lambda);

}  // namespace hlab
