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

// Experiment pipelines behind the CLI: audit, holonomy, transitivity and
// shift-demo. Each writes its reports and a manifest into the output
// directory.

#pragma once

#include <string>
#include <string_view>

#include "holonomy_lab/error.hpp"

namespace hlab {

/// Exit codes: 0 every certification passed, 1 a certification failed or an
/// engine error occurred, 2 invalid configuration.
struct ExperimentOutcome {
  int exit_code = 0;
  ErrorCode code = ErrorCode::ok;
  std::string error;
  std::string manifest_json;
};

const char* tool_version();

/// Never throws; failures are reported in the outcome and the manifest.
ExperimentOutcome run_experiment(std::string_view subcommand, std::string_view config_text);

}  // namespace hlab
