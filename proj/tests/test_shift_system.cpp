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

#include <gtest/gtest.h>

#include "holonomy_lab/conformal_structure.hpp"
#include "holonomy_lab/error.hpp"
#include "holonomy_lab/shift_system.hpp"

using namespace hlab;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ok;
}

const ShiftSpace& full2() {
  static const ShiftSpace s = ShiftSpace::full(2);
  return s;
}

}  // namespace

TEST(ShiftSpace, ParsesSpecsAndValidates) {
  EXPECT_EQ(ShiftSpace::parse("full3").alphabet_size(), 3);
  const ShiftSpace golden = ShiftSpace::parse("1,1;1,0");
  EXPECT_TRUE(golden.admits(0, 1));
  EXPECT_FALSE(golden.admits(1, 1));
  EXPECT_EQ(code_of([] { (void)ShiftSpace::parse("1,0;1,0"); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { (void)ShiftSpace::full(2, 1); }), ErrorCode::invalid_argument);
  EXPECT_EQ(full2().lambda_power(3), Rational(1, 8));
  EXPECT_EQ(full2().lambda_power(-2), Rational(4));
}

TEST(ShiftSpace, ParsesRationals) {
  EXPECT_EQ(parse_rational("2"), Rational(2));
  EXPECT_EQ(parse_rational("5/2"), Rational(5, 2));
  EXPECT_EQ(parse_rational("2.5"), Rational(5, 2));
  EXPECT_EQ(rational_string(Rational(1, 8)), "1/8");
  EXPECT_EQ(code_of([] { (void)parse_rational("x"); }), ErrorCode::invalid_argument);
}

TEST(ShiftPoint, RejectsInadmissibleWords) {
  const ShiftSpace golden = ShiftSpace::parse("1,1;1,0");
  EXPECT_EQ(code_of([&] { (void)ShiftPoint::parse(golden, "0|11@0|0"); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([&] { (void)ShiftPoint::parse(golden, "1|@0|0"); }), ErrorCode::invalid_argument);
  EXPECT_NO_THROW((void)ShiftPoint::parse(golden, "01|@0|0"));
}

TEST(ShiftPoint, NormalFormIsUnique) {
  const auto a = ShiftPoint::parse(full2(), "00|0@5|0000");
  EXPECT_EQ(a, ShiftPoint::constant(full2(), 0));
  EXPECT_TRUE(a.periodic());
  const auto b = ShiftPoint::parse(full2(), "1|1101@-2|0");
  const auto c = ShiftPoint::parse(full2(), "11|01@0|00");
  EXPECT_EQ(b, c);
}

TEST(ShiftPoint, ShiftMovesTheCore) {
  const auto x = ShiftPoint::parse(full2(), "1|01@0|0");
  const auto y = shift_iterate(x, 2);
  EXPECT_EQ(y.at(-2), 0);
  EXPECT_EQ(y.at(-1), 1);
  EXPECT_EQ(y.at(0), 0);
  EXPECT_EQ(y.at(-3), 1);
  EXPECT_EQ(shift_iterate(x, 0), x);
  EXPECT_EQ(shift_iterate(shift_iterate(x, 1), -1), x);
}

TEST(ShiftDistance, Examples) {
  const auto zero = ShiftPoint::constant(full2(), 0);
  EXPECT_EQ(base_distance(full2(), zero, ShiftPoint::parse(full2(), "0|1@-3|0")), Rational(1, 8));
  EXPECT_EQ(base_distance(full2(), zero, zero), Rational(0));
  EXPECT_EQ(base_distance(full2(), zero, ShiftPoint::parse(full2(), "0|1@0|0")), Rational(1));
  const ShiftSpace s52 = ShiftSpace::full(2, Rational(5, 2));
  const auto z52 = ShiftPoint::constant(s52, 0);
  EXPECT_EQ(base_distance(s52, z52, ShiftPoint::parse(s52, "0|1@3|0")), Rational(8, 125));
  EXPECT_EQ(first_difference(zero, ShiftPoint::parse(full2(), "0|10001@-2|0")), -2);
}

TEST(ShiftBracket, Examples) {
  const auto x = ShiftPoint::constant(full2(), 0);
  const auto y = ShiftPoint::parse(full2(), "1|0@0|1");
  const auto z = bracket_shift(full2(), x, y);
  EXPECT_EQ(z, ShiftPoint::parse(full2(), "1|@0|0"));
  for (long k = -5; k < 0; ++k) EXPECT_EQ(z.at(k), 1);
  for (long k = 0; k < 5; ++k) EXPECT_EQ(z.at(k), 0);
  EXPECT_EQ(bracket_shift(full2(), x, x), x);
  const auto w = ShiftPoint::parse(full2(), "1|@-4|0");
  EXPECT_EQ(bracket_shift(full2(), x, w), w);
  EXPECT_EQ(code_of([&] { (void)bracket_shift(full2(), x, ShiftPoint::constant(full2(), 1)); }),
            ErrorCode::too_far_apart);
}

TEST(ShiftLeaves, FirstIterateAndLeafDistance) {
  const auto y = ShiftPoint::constant(full2(), 0);
  const auto z = ShiftPoint::parse(full2(), "0|1@1|0");
  EXPECT_EQ(n_first_iterate(y, z, Leaf::stable), 2);
  EXPECT_EQ(n_first_iterate(y, ShiftPoint::parse(full2(), "1|@-1|0"), Leaf::stable), 0);
  EXPECT_EQ(n_first_iterate(y, y, Leaf::stable), 0);
  const ShiftConformalStructure cs(full2());
  const auto d = cs.leaf_distance(y, z, Leaf::stable);
  EXPECT_EQ(d.n, 2);
  EXPECT_EQ(d.value, Rational(2));
  EXPECT_EQ(code_of([&] { (void)cs.leaf_distance(y, ShiftPoint::constant(full2(), 1), Leaf::stable); }),
            ErrorCode::not_same_leaf);
  EXPECT_EQ(code_of([&] { (void)n_first_iterate(y, ShiftPoint::parse(full2(), "1|@3|0"), Leaf::unstable); }),
            ErrorCode::not_same_leaf);
  EXPECT_EQ(n_first_iterate(y, ShiftPoint::parse(full2(), "1|@3|0"), Leaf::stable), 3);
}

class ShiftProperty : public ::testing::TestWithParam<const char*> {
 protected:
  ShiftSpace space() const { return ShiftSpace::parse(GetParam()); }
};

TEST_P(ShiftProperty, RepresentationRoundTrips) {
  const ShiftSpace s = space();
  for (std::uint64_t i = 0; i < 500; ++i) {
    CounterRng rng(31, i);
    const ShiftPoint x = random_shift_point(s, rng);
    EXPECT_EQ(ShiftPoint::parse(s, x.to_string()), x);
    const long k = rng.between(-20, 20);
    const ShiftPoint y = shift_iterate(x, k);
    for (long j = -30; j <= 30; ++j) ASSERT_EQ(y.at(j), x.at(j + k));
    EXPECT_EQ(shift_iterate(y, -k), x);
  }
}

TEST_P(ShiftProperty, DistanceIsAnUltrametric) {
  const ShiftSpace s = space();
  for (std::uint64_t i = 0; i < 500; ++i) {
    CounterRng rng(32, i);
    const ShiftPoint x = random_shift_point(s, rng);
    const ShiftPoint y = random_past_variant(s, rng, x, rng.between(-4, 4));
    const ShiftPoint z = random_future_variant(s, rng, y, rng.between(-4, 4));
    const Rational dxy = base_distance(s, x, y);
    EXPECT_EQ(dxy, base_distance(s, y, x));
    EXPECT_EQ(dxy == 0, x == y);
    EXPECT_LE(base_distance(s, x, z), std::max(dxy, base_distance(s, y, z)));
  }
}

TEST_P(ShiftProperty, DistanceIsExactlyConformal) {
  const ShiftSpace s = space();
  const Rational xi = s.lambda_power(1);
  for (std::uint64_t i = 0; i < 300; ++i) {
    CounterRng rng(33, i);
    const ShiftPoint x = random_shift_point(s, rng);
    const ShiftPoint ys = random_past_variant(s, rng, x, rng.between(-6, 0));
    const ShiftPoint yu = random_future_variant(s, rng, x, rng.between(0, 6));
    ASSERT_LE(base_distance(s, x, ys), xi);
    const Rational ds = base_distance(s, x, ys);
    const Rational du = base_distance(s, x, yu);
    for (long k = 0; k <= 30; ++k) {
      EXPECT_EQ(base_distance(s, shift_iterate(x, k), shift_iterate(ys, k)), s.lambda_power(k) * ds);
      EXPECT_EQ(base_distance(s, shift_iterate(x, -k), shift_iterate(yu, -k)), s.lambda_power(k) * du);
    }
  }
}

TEST_P(ShiftProperty, BracketIsASplice) {
  const ShiftSpace s = space();
  const Rational xi = s.lambda_power(1);
  for (std::uint64_t i = 0; i < 300; ++i) {
    CounterRng rng(34, i);
    const ShiftPoint x = random_shift_point(s, rng);
    const ShiftPoint y = random_future_variant(s, rng, random_past_variant(s, rng, x, rng.between(-5, 0)),
                                               rng.between(0, 5));
    const ShiftPoint z = bracket_shift(s, x, y);
    for (long k = -20; k < 20; ++k) ASSERT_EQ(z.at(k), k >= 0 ? x.at(k) : y.at(k));
    for (long n = 0; n <= 30; ++n) {
      EXPECT_LE(base_distance(s, shift_iterate(z, n), shift_iterate(x, n)), xi);
      EXPECT_LE(base_distance(s, shift_iterate(z, -n), shift_iterate(y, -n)), xi);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Spaces, ShiftProperty, ::testing::Values("full2", "full3", "1,1;1,0"));
