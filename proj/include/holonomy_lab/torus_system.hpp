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

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "holonomy_lab/spectrum.hpp"

namespace hlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Leaf { stable, unstable };

inline const char* leaf_name(Leaf leaf) { return leaf == Leaf::stable ? "stable" : "unstable"; }
inline Leaf opposite(Leaf leaf) { return leaf == Leaf::stable ? Leaf::unstable : Leaf::stable; }

/// Real eigen-splitting of a hyperbolic integer matrix into 1-D invariant
/// lines. Eigenbasis columns are ordered stable lines first (ascending
/// modulus), then unstable lines (ascending modulus).
struct HyperbolicSplitting {
  std::vector<double> stable_eigenvalues;    // signed
  std::vector<double> unstable_eigenvalues;  // signed
  std::vector<double> stable_rates;          // |a_i| in (0,1), ascending
  std::vector<double> unstable_rates;        // |b_j| > 1, ascending
  std::vector<Vec> stable_dirs;
  std::vector<Vec> unstable_dirs;
  double lambda = 0.0;
  std::vector<double> stable_exponents;    // log(lambda) / log(1/|a_i|)
  std::vector<double> unstable_exponents;  // log(lambda) / log(|b_j|)

  Mat basis;          // columns = stable_dirs then unstable_dirs
  Mat basis_inverse;  // eigen coordinates = basis_inverse * v
  std::vector<double> eigenvalues;  // per basis column, signed
  std::vector<double> exponents;    // per basis column

  std::size_t dim() const noexcept { return eigenvalues.size(); }
  std::size_t stable_dim() const noexcept { return stable_rates.size(); }
  std::size_t unstable_dim() const noexcept { return unstable_rates.size(); }
  /// Basis column range [first, last) of a bundle.
  std::size_t first_column(Leaf leaf) const noexcept { return leaf == Leaf::stable ? 0 : stable_dim(); }
  std::size_t end_column(Leaf leaf) const noexcept { return leaf == Leaf::stable ? stable_dim() : dim(); }
  bool in_bundle(std::size_t column, Leaf leaf) const noexcept {
    return column >= first_column(leaf) && column < end_column(leaf);
  }
};

/// Validates that the matrix defines a real Anosov automorphism with simple
/// spectrum and returns its splitting. Throws Error with one of
/// not_unimodular, not_hyperbolic, repeated_eigenvalue, complex_spectrum.
HyperbolicSplitting validate_real_anosov(const IntMatrix& matrix);

/// A torus point together with a lift to R^n and its eigen coordinates.
/// Eigen coordinates are the primary state; iteration is diagonal in them.
class TorusLeafPoint {
 public:
  TorusLeafPoint() = default;
  TorusLeafPoint(Vec lift, Vec eigen_coords) : lift_(std::move(lift)), eigen_(std::move(eigen_coords)) {}

  const Vec& lift() const noexcept { return lift_; }
  const Vec& eigen_coords() const noexcept { return eigen_; }
  /// Representative of the torus point in [0,1)^n.
  Vec torus_point() const;

 private:
  Vec lift_;
  Vec eigen_;
};

class TorusSystem {
 public:
  static constexpr int default_horizon = 64;

  explicit TorusSystem(IntMatrix matrix, int horizon = default_horizon);

  const IntMatrix& matrix() const noexcept { return matrix_; }
  const IntMatrix& inverse_matrix() const noexcept { return inverse_; }
  const HyperbolicSplitting& splitting() const noexcept { return split_; }
  std::size_t dim() const noexcept { return split_.dim(); }
  double lambda() const noexcept { return split_.lambda; }
  int horizon() const noexcept { return horizon_; }

  TorusLeafPoint point(const Vec& lift) const;
  TorusLeafPoint from_eigen(const Vec& eigen_coords) const;
  /// x + displacement, displacement given in eigen coordinates.
  TorusLeafPoint translate(const TorusLeafPoint& x, const Vec& eigen_displacement) const;

  /// f^k applied diagonally in eigen coordinates. Throws horizon_exceeded.
  TorusLeafPoint iterate(const TorusLeafPoint& x, int k) const;
  /// D f^k applied to an eigen-coordinate vector.
  Vec scale(const Vec& eigen_vector, int k) const;

  /// w with y = x + w mod Z^n and ||w||_inf <= 1/2; each coordinate lies in
  /// (-1/2, 1/2] (ties resolve to the lexicographically smallest subtracted
  /// integer offset).
  Vec nearest_lift_displacement(const TorusLeafPoint& x, const TorusLeafPoint& y) const;
  /// Eigen coordinates of the nearest-lift displacement from x to y.
  Vec local_displacement(const TorusLeafPoint& x, const TorusLeafPoint& y) const;
  /// Eigen-coordinate difference y - x of the explicit lifts.
  Vec leaf_displacement(const TorusLeafPoint& x, const TorusLeafPoint& y) const;

  /// Local product [x,y] = W^s(x) cap W^u(y) through the nearest lift.
  /// Throws too_far_apart unless rho(nearest displacement) < delta0.
  TorusLeafPoint bracket(const TorusLeafPoint& x, const TorusLeafPoint& y, double delta0) const;
  /// (x + E^s) cap (y + E^u) for the given lifts, with no radius restriction.
  TorusLeafPoint leaf_intersection(const TorusLeafPoint& x, const TorusLeafPoint& y) const;

  /// Restriction of an eigen-coordinate vector to one bundle.
  Vec bundle_part(const Vec& eigen_vector, Leaf leaf) const;
  /// Largest |component| of an eigen vector outside the given bundle.
  double off_bundle(const Vec& eigen_vector, Leaf leaf) const;

 private:
  IntMatrix matrix_;
  IntMatrix inverse_;
  HyperbolicSplitting split_;
  int horizon_;
};

}  // namespace hlab
