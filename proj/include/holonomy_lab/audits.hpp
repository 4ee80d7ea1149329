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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "holonomy_lab/conformal_structure.hpp"
#include "holonomy_lab/random.hpp"

namespace hlab {

struct AuditReport {
  std::string kind;
  std::string model;  // "torus" or "shift"
  long samples = 0;
  std::optional<double> worst_value;  // empty when no sample was drawn
  std::string worst_witness;
  double threshold = 0.0;
  bool pass = true;
  std::vector<std::pair<std::string, double>> details;
};

/// Max relative violation of lambda^k d(f^k y, f^k x) = d(y, x) over local
/// stable pairs (k >= 0) and local unstable pairs (f^-k), k <= 20.
AuditReport conformality_audit(const ShiftConformalStructure& cs, long sample_count, std::uint64_t seed);
AuditReport conformality_audit(const TorusConformalStructure& cs, long sample_count, std::uint64_t seed);

/// d^s/d^u metric axioms and conformality d^s(f^k x, f^k y) = lambda^-k d^s(x, y)
/// on same-leaf pairs, k <= 20. Exact on the shift.
AuditReport leaf_conformality_audit(const ShiftConformalStructure& cs, long sample_count, std::uint64_t seed);
AuditReport leaf_conformality_audit(const TorusConformalStructure& cs, long sample_count, std::uint64_t seed);

/// Triangle defect d(x,z) / (d(x,y) + d(y,z)) on collinear and general
/// same-leaf triples. A probe: it is expected to exceed 1 when an exponent > 1.
AuditReport metric_audit(const ShiftConformalStructure& cs, long sample_count, std::uint64_t seed);
AuditReport metric_audit(const TorusConformalStructure& cs, long sample_count, std::uint64_t seed);

/// rho(v) <= L |v| and |v| <= n rho(v)^beta for |v| <= min(1/2, 1/(2L)).
AuditReport holder_equivalence_audit(const RhoGauge& gauge, long sample_count, std::uint64_t seed);

/// rho(A v) = rho(v) / lambda on stable vectors, rho(A^-1 v) = rho(v) / lambda
/// on unstable ones, with A applied as the integer matrix.
AuditReport rho_conformality_audit(const TorusSystem& system, long sample_count, std::uint64_t seed);

/// Uniform random lift in [0,1)^n.
TorusLeafPoint random_torus_point(const TorusSystem& system, CounterRng& rng);
/// Random eigen vector in one bundle whose gauge equals `gauge` (one
/// component attains it, the others stay below).
Vec random_bundle_vector(const TorusSystem& system, CounterRng& rng, Leaf leaf, double gauge);

namespace detail {

struct Sample {
  double value = 0.0;
  bool ok = true;
  std::string witness;
};

/// Evaluates fn(i) for i in [0, n) on worker threads; slot i holds fn(i).
std::vector<Sample> run_parallel(long n, const std::function<Sample(long)>& fn);
/// Max value, ties to the lowest index, so the result is independent of
/// scheduling. pass requires every sample ok.
AuditReport reduce(AuditReport base, const std::vector<Sample>& samples);

}  // namespace detail

}  // namespace hlab
