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

#include "holonomy_lab/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "holonomy_lab/error.hpp"

namespace hlab {

namespace {

std::string_view trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad(const std::string& key, std::string_view value, const std::string& why) {
  throw Error(ErrorCode::config_invalid, key + " = '" + std::string(value) + "': " + why);
}

double to_double(const std::string& key, std::string_view v) {
  std::string s(v);
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(s, &used);
  } catch (const std::exception&) {
    bad(key, v, "not a number");
  }
  if (used != s.size() || !std::isfinite(d)) bad(key, v, "not a finite number");
  return d;
}

template <typename T>
T to_integer(const std::string& key, std::string_view v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad(key, v, "not an integer");
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::config_invalid, "line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "matrix") {
      c.matrix = std::string(value);
      c.shift.reset();
    } else if (key == "shift") {
      c.shift = std::string(value);
      c.matrix.reset();
    } else if (key == "lambda") {
      c.lambda = std::string(value);
    } else if (key == "xi") {
      c.xi = to_double(key, value);
    } else if (key == "delta0") {
      c.delta0 = to_double(key, value);
    } else if (key == "eps") {
      c.eps = to_double(key, value);
    } else if (key == "delta") {
      if (value == "auto") {
        c.delta.reset();
      } else {
        c.delta = to_double(key, value);
      }
    } else if (key == "grid") {
      const auto x = value.find('x');
      if (x == std::string_view::npos) bad(key, value, "expected PxQ");
      c.unstable_grid = to_integer<int>(key, value.substr(0, x));
      c.stable_grid = to_integer<int>(key, value.substr(x + 1));
    } else if (key == "horizon") {
      c.horizon = to_integer<int>(key, value);
    } else if (key == "samples") {
      c.samples = to_integer<long>(key, value);
    } else if (key == "seed") {
      c.seed = to_integer<std::uint64_t>(key, value);
    } else if (key == "out") {
      c.out = std::string(value);
    } else if (key == "stable_length") {
      c.stable_length = to_double(key, value);
    } else if (key == "unstable_length") {
      c.unstable_length = to_double(key, value);
    } else if (key == "stable_line") {
      c.stable_line = to_integer<int>(key, value);
    } else if (key == "unstable_line") {
      c.unstable_line = to_integer<int>(key, value);
    } else if (key == "nmax") {
      c.nmax = to_integer<int>(key, value);
    } else if (key == "pairs") {
      c.pairs = to_integer<long>(key, value);
    } else {
      throw Error(ErrorCode::config_invalid, "unknown key '" + key + "'");
    }
  }
  return c;
}

void validate_config(const ExperimentConfig& c, double lambda) {
  auto positive = [](const char* key, double v) {
    if (!(v > 0.0)) throw Error(ErrorCode::config_invalid, std::string(key) + " must be positive");
  };
  positive("xi", c.xi);
  positive("delta0", c.delta0);
  positive("eps", c.eps);
  if (c.delta) positive("delta", *c.delta);
  positive("stable_length", c.stable_length);
  if (c.unstable_length) positive("unstable_length", *c.unstable_length);
  if (c.unstable_grid < 1 || c.stable_grid < 1) throw Error(ErrorCode::config_invalid, "grid sizes must be >= 1");
  if (c.horizon < 1) throw Error(ErrorCode::config_invalid, "horizon must be >= 1");
  if (c.samples < 1) throw Error(ErrorCode::config_invalid, "samples must be >= 1");
  if (c.pairs < 1) throw Error(ErrorCode::config_invalid, "pairs must be >= 1");
  if (c.nmax < 0 || c.nmax > c.horizon) throw Error(ErrorCode::config_invalid, "nmax must lie in [0, horizon]");
  if (c.stable_line < 0 || c.unstable_line < 0) throw Error(ErrorCode::config_invalid, "line indices must be >= 0");
  if (c.out.empty()) throw Error(ErrorCode::config_invalid, "out must be a directory path");
  if (!((1.0 + c.eps) / lambda < 1.0)) {
    throw Error(ErrorCode::config_invalid,
                "lambda^-1 (1 + eps) = " + fmt((1.0 + c.eps) / lambda) + " must be < 1 (lambda = " + fmt(lambda) + ")");
  }
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::snapshot() const {
  std::vector<std::pair<std::string, std::string>> s;
  if (shift) {
    s.emplace_back("shift", *shift);
    s.emplace_back("lambda", lambda);
  } else {
    s.emplace_back("matrix", matrix_or_default());
  }
  s.emplace_back("xi", fmt(xi));
  s.emplace_back("delta0", fmt(delta0));
  s.emplace_back("eps", fmt(eps));
  s.emplace_back("delta", delta ? fmt(*delta) : "auto");
  s.emplace_back("grid", std::to_string(unstable_grid) + "x" + std::to_string(stable_grid));
  s.emplace_back("horizon", std::to_string(horizon));
  s.emplace_back("samples", std::to_string(samples));
  s.emplace_back("seed", std::to_string(seed));
  s.emplace_back("out", out);
  s.emplace_back("stable_length", fmt(stable_length));
  s.emplace_back("unstable_length", unstable_length ? fmt(*unstable_length) : "delta");
  s.emplace_back("stable_line", std::to_string(stable_line));
  s.emplace_back("unstable_line", std::to_string(unstable_line));
  s.emplace_back("nmax", std::to_string(nmax));
  s.emplace_back("pairs", std::to_string(pairs));
  return s;
}

}  // namespace hlab
