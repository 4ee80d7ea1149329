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

#include <stdexcept>
#include <string>

namespace hlab {

// Numeric values are part of the C ABI (see holonomy_lab.h); append only.
enum class ErrorCode : int {
  ok = 0,
  not_unimodular = 1,
  complex_spectrum = 2,
  not_hyperbolic = 3,
  repeated_eigenvalue = 4,
  horizon_exceeded = 5,
  too_far_apart = 6,
  not_same_leaf = 7,
  degenerate_curve = 8,
  remainder_short = 9,
  too_large = 10,
  pseudo_isometry_violated = 11,
  boundary_mismatch = 12,
  blow_up = 13,
  unsupported_dimension = 14,
  config_invalid = 15,
  io_failure = 16,
  invalid_argument = 17,
  internal = 18,
};

const char* error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hlab
