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

// Subshifts of finite type with the exactly conformal metric
// d(x, y) = lambda^-N, N = min{|k| : x_k != y_k}. Points are eventually
// periodic in both directions so that every quantity is decidable.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "holonomy_lab/random.hpp"
#include "holonomy_lab/torus_system.hpp"  // Leaf

namespace hlab {

using Rational = mpq_class;
using Word = std::vector<int>;

/// Parses "2", "5/2", "2.5" into an exact rational.
Rational parse_rational(std::string_view text);
std::string rational_string(const Rational& q);

class ShiftSpace {
 public:
  ShiftSpace(int alphabet_size, std::vector<std::vector<bool>> adjacency, Rational lambda = 2);

  /// Full shift on k symbols.
  static ShiftSpace full(int k, Rational lambda = 2);
  /// "full2", "full3", ... or an adjacency matrix "1,1;1,0".
  static ShiftSpace parse(std::string_view spec, Rational lambda = 2);

  int alphabet_size() const noexcept { return k_; }
  const Rational& lambda() const noexcept { return lambda_; }
  bool admits(int a, int b) const { return adj_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
  const std::vector<std::vector<bool>>& adjacency() const noexcept { return adj_; }
  std::string spec() const { return spec_; }

  /// lambda^-n as an exact rational, n may be negative.
  Rational lambda_power(long n) const;

 private:
  int k_;
  std::vector<std::vector<bool>> adj_;
  Rational lambda_;
  std::string spec_;
};

/// Bi-infinite eventually periodic sequence: left_tail repeated to -inf,
/// core on [offset, offset + |core|), right_tail repeated to +inf. Always
/// held in normal form (primitive tails, minimal core, canonical offset).
class ShiftPoint {
 public:
  /// Validates admissibility against the space and normalizes.
  ShiftPoint(const ShiftSpace& space, Word left_tail, Word core, long offset, Word right_tail);

  /// Constant sequence ...aaa.aaa...
  static ShiftPoint constant(const ShiftSpace& space, int symbol);
  /// Parses "leftTail|core@offset|rightTail", e.g. "1|0@0|0".
  static ShiftPoint parse(const ShiftSpace& space, std::string_view text);

  int at(long k) const;

  const Word& left_tail() const noexcept { return left_; }
  const Word& core() const noexcept { return core_; }
  const Word& right_tail() const noexcept { return right_; }
  long offset() const noexcept { return offset_; }
  /// First coordinate of the right-periodic region.
  long right_begin() const noexcept { return offset_ + static_cast<long>(core_.size()); }
  bool periodic() const noexcept { return periodic_; }

  std::string to_string() const;

  bool operator==(const ShiftPoint& other) const = default;

  /// Shift by k: (sigma^k x)_j = x_{j+k}.
  ShiftPoint shifted(long k) const;

  /// z_k = past_source_k for k < cut, future_source_k for k >= cut.
  static ShiftPoint splice(const ShiftSpace& space, const ShiftPoint& past_source, const ShiftPoint& future_source,
                           long cut);

 private:
  ShiftPoint() = default;
  void normalize();

  Word left_;
  Word core_;
  Word right_;
  long offset_ = 0;
  bool periodic_ = false;
};

/// Coordinate of a difference with minimal |k| (ties take the negative one),
/// or nullopt if x == y.
std::optional<long> first_difference(const ShiftPoint& x, const ShiftPoint& y);
/// Largest coordinate where x and y differ, nullopt if equal. Throws
/// not_same_leaf if they differ at arbitrarily large coordinates.
std::optional<long> last_difference(const ShiftPoint& x, const ShiftPoint& y);
/// Smallest coordinate where x and y differ, nullopt if equal. Throws
/// not_same_leaf if they differ at arbitrarily negative coordinates.
std::optional<long> earliest_difference(const ShiftPoint& x, const ShiftPoint& y);

Rational base_distance(const ShiftSpace& space, const ShiftPoint& x, const ShiftPoint& y);
ShiftPoint shift_iterate(const ShiftPoint& x, long k);

/// [x,y]: future of x, past of y. Throws too_far_apart unless
/// base_distance(x, y) <= lambda^-1.
ShiftPoint bracket_shift(const ShiftSpace& space, const ShiftPoint& x, const ShiftPoint& y);

/// Least n >= 0 with sigma^n z in W^s_xi(sigma^n y) (stable), or with
/// sigma^-n z in W^u_xi(sigma^-n y) (unstable), xi = lambda^-1.
long n_first_iterate(const ShiftPoint& y, const ShiftPoint& z, Leaf direction);

/// True iff z in W^s_xi(y) (agree on k >= 0) or W^u_xi(y) (agree on k <= 0).
bool in_local_leaf(const ShiftPoint& y, const ShiftPoint& z, Leaf direction);

/// Random admissible point: random core of length <= max_core at offset
/// -max_core/2, tails closed off by random walks until a symbol repeats.
ShiftPoint random_shift_point(const ShiftSpace& space, CounterRng& rng, int max_core = 12);
/// Random point equal to x on [cut, inf), differing from x at cut-1 when the
/// graph permits a different predecessor.
ShiftPoint random_past_variant(const ShiftSpace& space, CounterRng& rng, const ShiftPoint& x, long cut);
/// Random point equal to x on (-inf, cut], differing at cut+1 when possible.
ShiftPoint random_future_variant(const ShiftSpace& space, CounterRng& rng, const ShiftPoint& x, long cut);

}  // namespace hlab
