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

#include "holonomy_lab/torus_system.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "holonomy_lab/error.hpp"
#include "holonomy_lab/rho_gauge.hpp"

namespace hlab {

namespace {

struct EigenLine {
  double value;
  Vec dir;
};

Vec eigenvector_for(const IntMatrix& matrix, double mu) {
  const auto n = static_cast<Eigen::Index>(matrix.dim());
  Mat a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      a(i, j) = static_cast<double>(matrix(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
  const Mat shifted = a - mu * Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(shifted, Eigen::ComputeFullV);
  Vec v = svd.matrixV().col(n - 1);
  v.normalize();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(v[i]) > 1e-9) {
      if (v[i] < 0) v = -v;
      break;
    }
  }
  return v;
}

double exponent_for(double lambda, double rate_log) {
  const double e = std::log(lambda) / rate_log;
  return std::abs(e - 1.0) < 1e-12 ? 1.0 : std::max(1.0, e);
}

}  // namespace

HyperbolicSplitting validate_real_anosov(const IntMatrix& matrix) {
  const std::size_t n = matrix.dim();
  if (n < 2) throw Error(ErrorCode::invalid_argument, "dimension must be at least 2");

  const mpz_class det = determinant(matrix);
  if (abs(det) != 1) {
    throw Error(ErrorCode::not_unimodular, "|det| = " + mpz_class(abs(det)).get_str() + " for " + matrix.to_string());
  }
  const RationalPoly p = to_rational(characteristic_polynomial(matrix));
  if (evaluate(p, 1) == 0 || evaluate(p, -1) == 0) {
    throw Error(ErrorCode::not_hyperbolic, "eigenvalue of modulus 1 for " + matrix.to_string());
  }
  if (degree(poly_gcd(p, derivative(p))) > 0) {
    throw Error(ErrorCode::repeated_eigenvalue, "characteristic polynomial is not squarefree");
  }
  const std::vector<double> roots = isolate_real_roots(p, mpq_class(1, 1) / mpq_class(mpz_class(1) << 80));
  if (roots.size() != n) {
    throw Error(ErrorCode::complex_spectrum,
                std::to_string(n - roots.size()) + " non-real eigenvalues for " + matrix.to_string());
  }

  std::vector<EigenLine> stable;
  std::vector<EigenLine> unstable;
  for (double mu : roots) {
    (std::abs(mu) < 1.0 ? stable : unstable).push_back({mu, eigenvector_for(matrix, mu)});
  }
  if (stable.empty() || unstable.empty()) {
    throw Error(ErrorCode::not_hyperbolic, "one bundle is empty");
  }
  auto by_modulus = [](const EigenLine& a, const EigenLine& b) { return std::abs(a.value) < std::abs(b.value); };
  std::sort(stable.begin(), stable.end(), by_modulus);
  std::sort(unstable.begin(), unstable.end(), by_modulus);

  HyperbolicSplitting s;
  double lambda = 1.0;
  for (const auto& l : stable) lambda = std::max(lambda, 1.0 / std::abs(l.value));
  for (const auto& l : unstable) lambda = std::max(lambda, std::abs(l.value));
  s.lambda = lambda;

  const auto dim = static_cast<Eigen::Index>(n);
  s.basis = Mat(dim, dim);
  Eigen::Index col = 0;
  for (const auto& l : stable) {
    s.stable_eigenvalues.push_back(l.value);
    s.stable_rates.push_back(std::abs(l.value));
    s.stable_dirs.push_back(l.dir);
    s.stable_exponents.push_back(exponent_for(lambda, -std::log(std::abs(l.value))));
    s.basis.col(col++) = l.dir;
  }
  for (const auto& l : unstable) {
    s.unstable_eigenvalues.push_back(l.value);
    s.unstable_rates.push_back(std::abs(l.value));
    s.unstable_dirs.push_back(l.dir);
    s.unstable_exponents.push_back(exponent_for(lambda, std::log(std::abs(l.value))));
    s.basis.col(col++) = l.dir;
  }
  s.eigenvalues = s.stable_eigenvalues;
  s.eigenvalues.insert(s.eigenvalues.end(), s.unstable_eigenvalues.begin(), s.unstable_eigenvalues.end());
  s.exponents = s.stable_exponents;
  s.exponents.insert(s.exponents.end(), s.unstable_exponents.begin(), s.unstable_exponents.end());
  s.basis_inverse = s.basis.fullPivLu().inverse();
  return s;
}

Vec TorusLeafPoint::torus_point() const {
  Vec p = lift_;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    p[i] -= std::floor(p[i]);
    if (p[i] >= 1.0) p[i] = 0.0;
  }
  return p;
}

TorusSystem::TorusSystem(IntMatrix matrix, int horizon)
    : matrix_(std::move(matrix)), split_(validate_real_anosov(matrix_)), horizon_(horizon) {
  inverse_ = unimodular_inverse(matrix_);
  if (horizon_ < 0) throw Error(ErrorCode::invalid_argument, "horizon must be non-negative");
}

TorusLeafPoint TorusSystem::point(const Vec& lift) const {
  if (static_cast<std::size_t>(lift.size()) != dim()) throw Error(ErrorCode::invalid_argument, "lift dimension");
  return TorusLeafPoint(lift, split_.basis_inverse * lift);
}

TorusLeafPoint TorusSystem::from_eigen(const Vec& eigen_coords) const {
  if (static_cast<std::size_t>(eigen_coords.size()) != dim()) {
    throw Error(ErrorCode::invalid_argument, "eigen coordinate dimension");
  }
  return TorusLeafPoint(split_.basis * eigen_coords, eigen_coords);
}

TorusLeafPoint TorusSystem::translate(const TorusLeafPoint& x, const Vec& d) const {
  return TorusLeafPoint(x.lift() + split_.basis * d, x.eigen_coords() + d);
}

Vec TorusSystem::scale(const Vec& c, int k) const {
  if (std::abs(k) > horizon_) {
    throw Error(ErrorCode::horizon_exceeded, "|k| = " + std::to_string(std::abs(k)) + " > " + std::to_string(horizon_));
  }
  Vec out = c;
  if (k == 0) return out;
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] *= std::pow(split_.eigenvalues[static_cast<std::size_t>(i)], k);
  return out;
}

TorusLeafPoint TorusSystem::iterate(const TorusLeafPoint& x, int k) const {
  if (k == 0) return x;
  return from_eigen(scale(x.eigen_coords(), k));
}

Vec TorusSystem::nearest_lift_displacement(const TorusLeafPoint& x, const TorusLeafPoint& y) const {
  Vec w = y.lift() - x.lift();
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] -= std::ceil(w[i] - 0.5);
  return w;
}

Vec TorusSystem::leaf_displacement(const TorusLeafPoint& x, const TorusLeafPoint& y) const {
  return y.eigen_coords() - x.eigen_coords();
}

Vec TorusSystem::local_displacement(const TorusLeafPoint& x, const TorusLeafPoint& y) const {
  Vec dc = leaf_displacement(x, y);
  const Vec w = split_.basis * dc;
  Vec offset = Vec::Zero(w.size());
  bool reduce = false;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    offset[i] = std::ceil(w[i] - 0.5);
    reduce = reduce || offset[i] != 0.0;
  }
  if (!reduce) return dc;
  return dc - split_.basis_inverse * offset;
}

TorusLeafPoint TorusSystem::bracket(const TorusLeafPoint& x, const TorusLeafPoint& y, double delta0) const {
  const Vec dc = local_displacement(x, y);
  const double g = rho_eigen(split_, dc);
  if (!(g < delta0)) {
    throw Error(ErrorCode::too_far_apart, "gauge " + std::to_string(g) + " >= delta0 " + std::to_string(delta0));
  }
  if (dc == leaf_displacement(x, y)) return leaf_intersection(x, y);
  return leaf_intersection(x, translate(x, dc));
}

TorusLeafPoint TorusSystem::leaf_intersection(const TorusLeafPoint& x, const TorusLeafPoint& y) const {
  // Unstable coordinates of x, stable coordinates of y, taken verbatim so
  // that z - x is exactly stable and z - y exactly unstable.
  Vec e = x.eigen_coords();
  for (std::size_t i = split_.first_column(Leaf::stable); i < split_.end_column(Leaf::stable); ++i) {
    e[static_cast<Eigen::Index>(i)] = y.eigen_coords()[static_cast<Eigen::Index>(i)];
  }
  const Vec ds = bundle_part(e - x.eigen_coords(), Leaf::stable);
  return TorusLeafPoint(x.lift() + split_.basis * ds, e);
}

Vec TorusSystem::bundle_part(const Vec& c, Leaf leaf) const {
  Vec out = Vec::Zero(c.size());
  for (std::size_t i = split_.first_column(leaf); i < split_.end_column(leaf); ++i) {
    out[static_cast<Eigen::Index>(i)] = c[static_cast<Eigen::Index>(i)];
  }
  return out;
}

double TorusSystem::off_bundle(const Vec& c, Leaf leaf) const {
  double m = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!split_.in_bundle(i, leaf)) m = std::max(m, std::abs(c[static_cast<Eigen::Index>(i)]));
  }
  return m;
}

}  // namespace hlab
