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

#include "holonomy_lab/rho_gauge.hpp"

#include <algorithm>
#include <cmath>

namespace hlab {

double rho_eigen(const HyperbolicSplitting& split_, const Vec& c) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double a = std::abs(c[i]);
    if (a == 0.0) continue;
    const double e = split_.exponents[static_cast<std::size_t>(i)];
    r = std::max(r, e == 1.0 ? a : std::pow(a, e));
  }
  return r;
}

double RhoGauge::holder_constant() const {
  double l = 0.0;
  for (Eigen::Index i = 0; i < split_.basis_inverse.rows(); ++i) {
    l = std::max(l, split_.basis_inverse.row(i).norm());
  }
  return l;
}

double RhoGauge::holder_exponent() const {
  double b = 1.0;
  for (double e : split_.exponents) b = std::min(b, 1.0 / e);
  return b;
}

}  // namespace hlab
