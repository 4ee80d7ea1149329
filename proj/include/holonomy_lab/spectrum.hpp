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

// Exact integer-matrix spectrum tools: characteristic polynomial over Z and
// certified isolation of its real roots with Sturm sequences over Q.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace hlab {

/// Square integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t n, std::vector<std::int64_t> entries);

  /// Parses "2,1;1,1" (rows separated by ';'). Throws Error(invalid_argument).
  static IntMatrix parse(std::string_view text);
  static IntMatrix identity(std::size_t n);

  std::size_t dim() const noexcept { return n_; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  const std::vector<std::int64_t>& entries() const noexcept { return entries_; }

  IntMatrix operator*(const IntMatrix& other) const;
  bool operator==(const IntMatrix& other) const = default;

  std::string to_string() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> entries_;
};

mpz_class determinant(const IntMatrix& m);

/// Coefficients c_0..c_n of det(t I - M), lowest degree first (c_n = 1).
std::vector<mpz_class> characteristic_polynomial(const IntMatrix& m);

/// Inverse of a unimodular matrix (exact). Throws Error(not_unimodular).
IntMatrix unimodular_inverse(const IntMatrix& m);

/// Rational polynomial, coefficients lowest degree first, no trailing zeros.
using RationalPoly = std::vector<mpq_class>;

RationalPoly to_rational(const std::vector<mpz_class>& coeffs);
mpq_class evaluate(const RationalPoly& p, const mpq_class& x);
RationalPoly derivative(const RationalPoly& p);
RationalPoly poly_remainder(const RationalPoly& a, const RationalPoly& b);
RationalPoly poly_gcd(RationalPoly a, RationalPoly b);
inline int degree(const RationalPoly& p) { return static_cast<int>(p.size()) - 1; }

/// Sturm chain of a squarefree polynomial.
class SturmSequence {
 public:
  explicit SturmSequence(const RationalPoly& p);

  /// Number of sign changes of the chain at x.
  int sign_changes(const mpq_class& x) const;
  /// Distinct real roots in (a, b], for a < b.
  int roots_in(const mpq_class& a, const mpq_class& b) const;

 private:
  std::vector<RationalPoly> chain_;
};

/// Bound B with every root in (-B, B).
mpq_class cauchy_root_bound(const RationalPoly& p);

/// Isolates and refines every real root of a squarefree polynomial.
/// Roots are returned ascending; each is the midpoint of a certified
/// isolating interval of width at most `width`.
std::vector<double> isolate_real_roots(const RationalPoly& p, const mpq_class& width);

}  // namespace hlab
