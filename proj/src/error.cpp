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

#include "holonomy_lab/error.hpp"

namespace hlab {

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ok: return "Ok";
    case ErrorCode::not_unimodular: return "NotUnimodular";
    case ErrorCode::complex_spectrum: return "ComplexSpectrum";
    case ErrorCode::not_hyperbolic: return "NotHyperbolic";
    case ErrorCode::repeated_eigenvalue: return "RepeatedEigenvalue";
    case ErrorCode::horizon_exceeded: return "HorizonExceeded";
    case ErrorCode::too_far_apart: return "TooFarApart";
    case ErrorCode::not_same_leaf: return "NotSameLeaf";
    case ErrorCode::degenerate_curve: return "DegenerateCurve";
    case ErrorCode::remainder_short: return "RemainderShort";
    case ErrorCode::too_large: return "TooLarge";
    case ErrorCode::pseudo_isometry_violated: return "PseudoIsometryViolated";
    case ErrorCode::boundary_mismatch: return "BoundaryMismatch";
    case ErrorCode::blow_up: return "BlowUp";
    case ErrorCode::unsupported_dimension: return "UnsupportedDimension";
    case ErrorCode::config_invalid: return "ConfigInvalid";
    case ErrorCode::io_failure: return "IoFailure";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace hlab
