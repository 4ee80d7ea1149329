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

// Report emission: JSON with stable key order and 17 significant digits,
// RFC-4180 CSV tables, SHA-256 digests and file writing.

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "holonomy_lab/audits.hpp"
#include "holonomy_lab/holonomy_engine.hpp"
#include "holonomy_lab/transitivity.hpp"

namespace hlab {

using Json = nlohmann::ordered_json;

/// Two-space indented JSON, doubles as %.17g, non-finite doubles as null,
/// trailing newline.
std::string dump_json(const Json& value);

Json to_json(const AuditReport& report);
Json to_json(const HolonomyReport& report);
Json to_json(const TransitivityWitness& witness);
Json vec_json(const Vec& v);

/// Quotes a field when it holds a comma, quote or line break.
std::string csv_field(std::string_view text);
std::string csv_number(double value);

/// row, stable_param, unstable_length, ratio
std::string rows_csv(const HolonomyReport& report, const SURectangle& rectangle);
/// n, forward_gauge, backward_gauge, expected
std::string decay_csv(const TransitivityWitness& witness);

std::string sha256_hex(std::string_view bytes);

struct WrittenFile {
  std::string name;
  std::size_t bytes = 0;
  std::string sha256;
};

/// Writes dir/name (creating dir). Throws Error(io_failure).
WrittenFile write_file(const std::filesystem::path& dir, const std::string& name, const std::string& content);

}  // namespace hlab
