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

#include "holonomy_lab/spectrum.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "holonomy_lab/error.hpp"

namespace hlab {

namespace {

void trim(RationalPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int sign_of(const mpq_class& q) { return sgn(q); }

}  // namespace

IntMatrix::IntMatrix(std::size_t n, std::vector<std::int64_t> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n_ == 0 || entries_.size() != n_ * n_) {
    throw Error(ErrorCode::invalid_argument, "matrix must be square and non-empty");
  }
}

IntMatrix IntMatrix::parse(std::string_view text) {
  std::vector<std::vector<std::int64_t>> rows(1);
  std::string token;
  auto flush = [&] {
    std::size_t b = token.find_first_not_of(" \t");
    std::size_t e = token.find_last_not_of(" \t");
    if (b == std::string::npos) throw Error(ErrorCode::invalid_argument, "empty matrix entry");
    std::string_view t(token.data() + b, e - b + 1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      throw Error(ErrorCode::invalid_argument, "bad matrix entry '" + std::string(t) + "'");
    }
    rows.back().push_back(v);
    token.clear();
  };
  for (char c : text) {
    if (c == ',') {
      flush();
    } else if (c == ';') {
      flush();
      rows.emplace_back();
    } else {
      token.push_back(c);
    }
  }
  flush();
  const std::size_t n = rows.size();
  std::vector<std::int64_t> entries;
  for (const auto& r : rows) {
    if (r.size() != n) throw Error(ErrorCode::invalid_argument, "matrix is not square");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return IntMatrix(n, std::move(entries));
}

IntMatrix IntMatrix::identity(std::size_t n) {
  std::vector<std::int64_t> e(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1;
  return IntMatrix(n, std::move(e));
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const {
  if (other.n_ != n_) throw Error(ErrorCode::invalid_argument, "dimension mismatch");
  std::vector<std::int64_t> e(n_ * n_, 0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t j = 0; j < n_; ++j) e[i * n_ + j] += (*this)(i, k) * other(k, j);
  return IntMatrix(n_, std::move(e));
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < n_; ++i) {
    if (i) os << ';';
    for (std::size_t j = 0; j < n_; ++j) {
      if (j) os << ',';
      os << (*this)(i, j);
    }
  }
  return os.str();
}

mpz_class determinant(const IntMatrix& m) {
  // Bareiss fraction-free elimination.
  const std::size_t n = m.dim();
  std::vector<mpz_class> a(n * n);
  for (std::size_t i = 0; i < n * n; ++i) a[i] = static_cast<long>(m.entries()[i]);
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r * n + k] == 0) ++r;
      if (r == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[r * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
      }
    }
    prev = a[k * n + k];
  }
  return sign * a[(n - 1) * n + (n - 1)];
}

std::vector<mpz_class> characteristic_polynomial(const IntMatrix& m) {
  // Faddeev-LeVerrier: M_1 = I, c_{n-k} = -tr(A M_k)/k, M_{k+1} = A M_k + c_{n-k} I.
  // Every division is exact over Z.
  const std::size_t n = m.dim();
  std::vector<mpz_class> a(n * n);
  for (std::size_t i = 0; i < n * n; ++i) a[i] = static_cast<long>(m.entries()[i]);
  std::vector<mpz_class> c(n + 1);
  c[n] = 1;
  std::vector<mpz_class> mk(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) mk[i * n + i] = 1;
  std::vector<mpz_class> am(n * n);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        mpz_class s = 0;
        for (std::size_t l = 0; l < n; ++l) s += a[i * n + l] * mk[l * n + j];
        am[i * n + j] = s;
      }
    mpz_class tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am[i * n + i];
    c[n - k] = -tr / static_cast<long>(k);
    mk = am;
    for (std::size_t i = 0; i < n; ++i) mk[i * n + i] += c[n - k];
  }
  return c;
}

IntMatrix unimodular_inverse(const IntMatrix& m) {
  const mpz_class det = determinant(m);
  if (abs(det) != 1) throw Error(ErrorCode::not_unimodular, "determinant " + det.get_str());
  // Cayley-Hamilton: A^{-1} = -(A^{n-1} + c_{n-1} A^{n-2} + ... + c_1 I) / c_0.
  const auto c = characteristic_polynomial(m);
  const std::size_t n = m.dim();
  std::vector<mpz_class> acc(n * n, 0);  // Horner in matrix form
  std::vector<mpz_class> a(n * n);
  for (std::size_t i = 0; i < n * n; ++i) a[i] = static_cast<long>(m.entries()[i]);
  for (std::size_t i = 0; i < n; ++i) acc[i * n + i] = 1;  // c_n
  for (std::size_t k = n - 1; k >= 1; --k) {
    std::vector<mpz_class> next(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        mpz_class s = 0;
        for (std::size_t l = 0; l < n; ++l) s += a[i * n + l] * acc[l * n + j];
        next[i * n + j] = s;
      }
    for (std::size_t i = 0; i < n; ++i) next[i * n + i] += c[k];
    acc = std::move(next);
  }
  std::vector<std::int64_t> e(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    mpz_class v = -acc[i] / c[0];
    if (!v.fits_slong_p()) throw Error(ErrorCode::invalid_argument, "inverse entry overflows int64");
    e[i] = v.get_si();
  }
  return IntMatrix(n, std::move(e));
}

RationalPoly to_rational(const std::vector<mpz_class>& coeffs) {
  RationalPoly p(coeffs.begin(), coeffs.end());
  trim(p);
  return p;
}

mpq_class evaluate(const RationalPoly& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

RationalPoly derivative(const RationalPoly& p) {
  RationalPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  trim(d);
  return d;
}

RationalPoly poly_remainder(const RationalPoly& a, const RationalPoly& b) {
  if (b.empty()) throw Error(ErrorCode::invalid_argument, "division by zero polynomial");
  RationalPoly r = a;
  trim(r);
  const int db = degree(b);
  while (!r.empty() && degree(r) >= db) {
    const mpq_class f = r.back() / b.back();
    const int shift = degree(r) - db;
    for (int i = 0; i <= db; ++i) r[shift + i] -= f * b[i];
    r.pop_back();
    trim(r);
  }
  return r;
}

RationalPoly poly_gcd(RationalPoly a, RationalPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    RationalPoly r = poly_remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const mpq_class lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

SturmSequence::SturmSequence(const RationalPoly& p) {
  chain_.push_back(p);
  trim(chain_.back());
  chain_.push_back(derivative(chain_.back()));
  while (!chain_.back().empty() && degree(chain_.back()) > 0) {
    RationalPoly r = poly_remainder(chain_[chain_.size() - 2], chain_.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    chain_.push_back(std::move(r));
  }
  if (chain_.back().empty()) chain_.pop_back();
}

int SturmSequence::sign_changes(const mpq_class& x) const {
  int changes = 0;
  int last = 0;
  for (const auto& q : chain_) {
    const int s = sign_of(evaluate(q, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int SturmSequence::roots_in(const mpq_class& a, const mpq_class& b) const {
  return sign_changes(a) - sign_changes(b);
}

mpq_class cauchy_root_bound(const RationalPoly& p) {
  mpq_class m = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) m = std::max(m, mpq_class(abs(p[i] / p.back())));
  return m + 1;
}

std::vector<double> isolate_real_roots(const RationalPoly& p, const mpq_class& width) {
  const SturmSequence sturm(p);
  const mpq_class bound = cauchy_root_bound(p);
  struct Interval {
    mpq_class lo, hi;
    int count;
  };
  std::vector<Interval> work{{-bound, bound, sturm.roots_in(-bound, bound)}};
  std::vector<Interval> isolated;
  while (!work.empty()) {
    Interval iv = work.back();
    work.pop_back();
    if (iv.count == 0) continue;
    if (iv.count == 1) {
      isolated.push_back(iv);
      continue;
    }
    mpq_class mid = (iv.lo + iv.hi) / 2;
    const int left = sturm.roots_in(iv.lo, mid);
    work.push_back({mid, iv.hi, iv.count - left});
    work.push_back({iv.lo, mid, left});
  }
  std::vector<double> roots;
  for (auto& iv : isolated) {
    // Root lies in (lo, hi]; p is squarefree so it changes sign across it.
    if (sign_of(evaluate(p, iv.hi)) == 0) {
      roots.push_back(iv.hi.get_d());
      continue;
    }
    const int s_hi = sign_of(evaluate(p, iv.hi));
    while (iv.hi - iv.lo > width) {
      mpq_class mid = (iv.lo + iv.hi) / 2;
      const int s = sign_of(evaluate(p, mid));
      if (s == 0) {
        iv.lo = iv.hi = mid;
        break;
      }
      if (s == s_hi) {
        iv.hi = mid;
      } else {
        iv.lo = mid;
      }
    }
    roots.push_back(mpq_class((iv.lo + iv.hi) / 2).get_d());
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace hlab
