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

#include "holonomy_lab/torus_system.hpp"

namespace hlab {

/// Gauge of an eigen-coordinate vector; see RhoGauge.
double rho_eigen(const HyperbolicSplitting& splitting, const Vec& eigen_vector);

/// rho(v) = max_i |v_i|^{e_i} over the eigen-line components of v, where
/// e_i = log(lambda)/log(rate_i) >= 1. Not a norm once some e_i > 1.
class RhoGauge {
 public:
  explicit RhoGauge(const HyperbolicSplitting& splitting) : split_(splitting) {}

  double of_eigen(const Vec& eigen_vector) const { return rho_eigen(split_, eigen_vector); }
  double operator()(const Vec& v) const { return of_eigen(split_.basis_inverse * v); }

  /// Sufficient constant with ||v_i|| <= L ||v|| for every line component.
  double holder_constant() const;
  /// min over lines of 1/e_i.
  double holder_exponent() const;

  const HyperbolicSplitting& splitting() const noexcept { return split_; }

 private:
  HyperbolicSplitting split_;
};

}  // namespace hlab
