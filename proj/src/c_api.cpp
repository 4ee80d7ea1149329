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

#include "holonomy_lab/holonomy_lab.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "holonomy_lab/conformal_structure.hpp"
#include "holonomy_lab/experiment.hpp"

struct hl_torus {
  hlab::TorusSystem system;
};

struct hl_shift {
  hlab::ShiftSpace space;
};

namespace {

thread_local std::string last_error;

hl_status fail(hl_status s, std::string message) {
  last_error = std::move(message);
  return s;
}

template <typename F>
hl_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const hlab::Error& e) {
    return fail(static_cast<hl_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(HL_INTERNAL, "Internal: out of memory");
  } catch (const std::exception& e) {
    return fail(HL_INTERNAL, std::string("Internal: ") + e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hlab::Vec to_vec(const double* v, std::size_t n) {
  hlab::Vec out(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

void from_vec(const hlab::Vec& v, double* out) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v[i];
}

#define HL_REQUIRE(cond, what) \
  if (!(cond)) return fail(HL_INVALID_ARGUMENT, std::string("InvalidArgument: ") + (what))

}  // namespace

extern "C" {

hl_status hl_torus_create(const int64_t* entries, size_t n, int horizon, hl_torus** out) {
  HL_REQUIRE(entries && out, "null pointer");
  return guarded([&] {
    *out = nullptr;
    std::vector<std::int64_t> e(entries, entries + n * n);
    *out = new hl_torus{hlab::TorusSystem(hlab::IntMatrix(n, std::move(e)), horizon)};
    return HL_OK;
  });
}

hl_status hl_torus_parse(const char* matrix, int horizon, hl_torus** out) {
  HL_REQUIRE(matrix && out, "null pointer");
  return guarded([&] {
    *out = nullptr;
    *out = new hl_torus{hlab::TorusSystem(hlab::IntMatrix::parse(matrix), horizon)};
    return HL_OK;
  });
}

void hl_torus_destroy(hl_torus* torus) { delete torus; }

size_t hl_torus_dimension(const hl_torus* torus) { return torus ? torus->system.dim() : 0; }

hl_status hl_torus_lambda(const hl_torus* torus, double* out) {
  HL_REQUIRE(torus && out, "null pointer");
  *out = torus->system.lambda();
  return HL_OK;
}

hl_status hl_torus_rho(const hl_torus* torus, const double* v, double* out) {
  HL_REQUIRE(torus && v && out, "null pointer");
  return guarded([&] {
    const hlab::RhoGauge gauge(torus->system.splitting());
    *out = gauge(to_vec(v, torus->system.dim()));
    return HL_OK;
  });
}

hl_status hl_torus_iterate(const hl_torus* torus, const double* x, int k, double* out) {
  HL_REQUIRE(torus && x && out, "null pointer");
  return guarded([&] {
    const auto& sys = torus->system;
    from_vec(sys.iterate(sys.point(to_vec(x, sys.dim())), k).lift(), out);
    return HL_OK;
  });
}

hl_status hl_torus_bracket(const hl_torus* torus, const double* x, const double* y, double delta0, double* out) {
  HL_REQUIRE(torus && x && y && out, "null pointer");
  return guarded([&] {
    const auto& sys = torus->system;
    from_vec(sys.bracket(sys.point(to_vec(x, sys.dim())), sys.point(to_vec(y, sys.dim())), delta0).lift(), out);
    return HL_OK;
  });
}

hl_status hl_shift_create(const char* spec, const char* lambda, hl_shift** out) {
  HL_REQUIRE(spec && out, "null pointer");
  return guarded([&] {
    *out = nullptr;
    const hlab::Rational l = lambda ? hlab::parse_rational(lambda) : hlab::Rational(2);
    *out = new hl_shift{hlab::ShiftSpace::parse(spec, l)};
    return HL_OK;
  });
}

void hl_shift_destroy(hl_shift* shift) { delete shift; }

hl_status hl_shift_base_distance(const hl_shift* shift, const char* x, const char* y, char** out) {
  HL_REQUIRE(shift && x && y && out, "null pointer");
  return guarded([&] {
    *out = nullptr;
    const auto px = hlab::ShiftPoint::parse(shift->space, x);
    const auto py = hlab::ShiftPoint::parse(shift->space, y);
    *out = copy_string(hlab::rational_string(hlab::base_distance(shift->space, px, py)));
    return HL_OK;
  });
}

hl_status hl_shift_bracket(const hl_shift* shift, const char* x, const char* y, char** out) {
  HL_REQUIRE(shift && x && y && out, "null pointer");
  return guarded([&] {
    *out = nullptr;
    const auto px = hlab::ShiftPoint::parse(shift->space, x);
    const auto py = hlab::ShiftPoint::parse(shift->space, y);
    *out = copy_string(hlab::bracket_shift(shift->space, px, py).to_string());
    return HL_OK;
  });
}

hl_status hl_run_experiment(const char* subcommand, const char* config_text, int* exit_code, char** manifest_json) {
  HL_REQUIRE(subcommand && exit_code, "null pointer");
  return guarded([&] {
    if (manifest_json) *manifest_json = nullptr;
    const auto outcome = hlab::run_experiment(subcommand, config_text ? config_text : "");
    *exit_code = outcome.exit_code;
    if (manifest_json) *manifest_json = copy_string(outcome.manifest_json);
    if (outcome.code != hlab::ErrorCode::ok) return fail(static_cast<hl_status>(outcome.code), outcome.error);
    return HL_OK;
  });
}

void hl_string_free(char* text) { std::free(text); }

const char* hl_last_error(void) { return last_error.c_str(); }

const char* hl_version(void) { return hlab::tool_version(); }

const char* hl_status_name(hl_status status) {
  return hlab::error_name(static_cast<hlab::ErrorCode>(status));
}

}  // extern "C"
