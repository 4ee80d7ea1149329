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

#include "holonomy_lab/error.hpp"
#include "holonomy_lab/random.hpp"
#include "holonomy_lab/spectrum.hpp"
#include "test_support.hpp"

using namespace hlab;
using hlab::testing::cubic_root;

namespace {

ErrorCode code_of(const char* m) {
  try {
    (void)IntMatrix::parse(m);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ok;
}

// Random 3x3 or 4x4 integer matrix with small entries.
IntMatrix random_matrix(CounterRng& rng, std::size_t n) {
  std::vector<std::int64_t> e(n * n);
  for (auto& v : e) v = rng.between(-4, 4);
  return IntMatrix(n, e);
}

// Product of random elementary matrices: unimodular by construction.
IntMatrix random_unimodular(CounterRng& rng, std::size_t n) {
  IntMatrix m = IntMatrix::identity(n);
  for (int step = 0; step < 6; ++step) {
    std::vector<std::int64_t> e = IntMatrix::identity(n).entries();
    const auto i = static_cast<std::size_t>(rng.below(n));
    auto j = static_cast<std::size_t>(rng.below(n - 1));
    if (j >= i) ++j;
    e[i * n + j] = rng.between(-2, 2);
    m = m * IntMatrix(n, e);
  }
  return m;
}

}  // namespace

TEST(IntMatrix, ParsesRowsAndRoundTrips) {
  const IntMatrix m = IntMatrix::parse("2,1;1,1");
  EXPECT_EQ(m.dim(), 2u);
  EXPECT_EQ(m(0, 0), 2);
  EXPECT_EQ(m(1, 0), 1);
  EXPECT_EQ(IntMatrix::parse(m.to_string()), m);
  EXPECT_EQ(code_of("2,1;1"), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of("a,b;c,d"), ErrorCode::invalid_argument);
}

TEST(Spectrum, CatMapCharacteristicPolynomial) {
  const auto p = characteristic_polynomial(IntMatrix::parse("2,1;1,1"));
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0], 1);
  EXPECT_EQ(p[1], -3);
  EXPECT_EQ(p[2], 1);
  EXPECT_EQ(determinant(IntMatrix::parse("2,1;1,1")), 1);
}

TEST(Spectrum, CubicRootsMatchClosedForm) {
  const auto p = to_rational(characteristic_polynomial(IntMatrix::parse(hlab::testing::kCubic)));
  const auto roots = isolate_real_roots(p, mpq_class(1, 1) / mpq_class(mpz_class(1) << 80));
  ASSERT_EQ(roots.size(), 3u);
  EXPECT_NEAR(roots[0], cubic_root(5), 1e-15);
  EXPECT_NEAR(roots[1], cubic_root(3), 1e-15);
  EXPECT_NEAR(roots[2], cubic_root(1), 1e-15);
}

TEST(Spectrum, SturmCountsComplexPairAsNoRealRoots) {
  const auto p = to_rational(characteristic_polynomial(IntMatrix::parse("0,-1;1,0")));
  const SturmSequence s(p);
  EXPECT_EQ(s.roots_in(-10, 10), 0);
  const auto q = to_rational(characteristic_polynomial(IntMatrix::parse("2,1;1,1")));
  EXPECT_EQ(SturmSequence(q).roots_in(0, 1), 1);
  EXPECT_EQ(SturmSequence(q).roots_in(1, 3), 1);
}

TEST(SpectrumProperty, CayleyHamiltonHoldsExactly) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    CounterRng rng(11, s);
    const std::size_t n = 2 + rng.below(3);
    const IntMatrix m = random_matrix(rng, n);
    const auto c = characteristic_polynomial(m);
    // p(M) = sum c_k M^k evaluated in exact integers.
    std::vector<mpz_class> acc(n * n, 0);
    std::vector<mpz_class> power(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) power[i * n + i] = 1;
    for (std::size_t k = 0; k < c.size(); ++k) {
      for (std::size_t i = 0; i < n * n; ++i) acc[i] += c[k] * power[i];
      std::vector<mpz_class> next(n * n, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t l = 0; l < n; ++l) next[i * n + j] += power[i * n + l] * m(l, j);
      power = next;
    }
    for (const auto& v : acc) ASSERT_EQ(v, 0) << m.to_string();
    EXPECT_EQ(c.back(), 1);
  }
}

TEST(SpectrumProperty, UnimodularInverseIsExact) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    CounterRng rng(12, s);
    const std::size_t n = 2 + rng.below(3);
    const IntMatrix m = random_unimodular(rng, n);
    EXPECT_EQ(abs(determinant(m)), 1);
    EXPECT_EQ(m * unimodular_inverse(m), IntMatrix::identity(n));
  }
}

TEST(Spectrum, InverseOfSingularMatrixIsRejected) {
  try {
    (void)unimodular_inverse(IntMatrix::parse("2,0;0,1"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_unimodular);
  }
}
