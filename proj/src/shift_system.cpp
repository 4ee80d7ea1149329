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

#include "holonomy_lab/shift_system.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

#include "holonomy_lab/error.hpp"

namespace hlab {

namespace {

constexpr const char* kSymbols = "0123456789abcdefghijklmnopqrstuvwxyz";

long floor_mod(long a, long m) {
  const long r = a % m;
  return r < 0 ? r + m : r;
}

/// Shortest word whose repetition equals w.
Word primitive_root(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = w[i] == w[i - d];
    if (ok) return Word(w.begin(), w.begin() + static_cast<long>(d));
  }
  return w;
}

int parse_symbol(char c) {
  const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const std::string_view symbols(kSymbols);
  const auto pos = symbols.find(lower);
  if (pos == std::string_view::npos) throw Error(ErrorCode::invalid_argument, std::string("bad symbol '") + c + "'");
  return static_cast<int>(pos);
}

Word parse_word(std::string_view text) {
  Word w;
  for (char c : text) w.push_back(parse_symbol(c));
  return w;
}

std::string word_string(const Word& w) {
  std::string s;
  for (int a : w) s.push_back(kSymbols[a]);
  return s;
}

long lcm_long(long a, long b) { return std::lcm(a, b); }

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty()) throw Error(ErrorCode::invalid_argument, "empty rational");
  try {
    const auto dot = t.find('.');
    if (dot == std::string::npos) {
      Rational q(t);
      q.canonicalize();
      if (q.get_den() == 0) throw Error(ErrorCode::invalid_argument, "zero denominator");
      return q;
    }
    std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    const std::size_t frac = t.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") throw Error(ErrorCode::invalid_argument, "bad decimal");
    if (digits[0] == '+') digits.erase(0, 1);
    mpz_class num(digits);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    Rational q(num, den);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::invalid_argument, "bad rational '" + t + "'");
  }
}

std::string rational_string(const Rational& q) { return q.get_str(); }

ShiftSpace::ShiftSpace(int alphabet_size, std::vector<std::vector<bool>> adjacency, Rational lambda)
    : k_(alphabet_size), adj_(std::move(adjacency)), lambda_(std::move(lambda)) {
  if (k_ < 1 || k_ > 36) throw Error(ErrorCode::invalid_argument, "alphabet size must be in [1, 36]");
  if (adj_.size() != static_cast<std::size_t>(k_)) throw Error(ErrorCode::invalid_argument, "adjacency size");
  for (const auto& row : adj_) {
    if (row.size() != static_cast<std::size_t>(k_)) throw Error(ErrorCode::invalid_argument, "adjacency not square");
  }
  for (int a = 0; a < k_; ++a) {
    bool out = false;
    bool in = false;
    for (int b = 0; b < k_; ++b) {
      out = out || adj_[a][b];
      in = in || adj_[b][a];
    }
    if (!out || !in) {
      throw Error(ErrorCode::invalid_argument, "symbol " + std::to_string(a) + " has an empty adjacency row or column");
    }
  }
  if (lambda_ <= 1) throw Error(ErrorCode::invalid_argument, "lambda must exceed 1");
  std::ostringstream os;
  for (int a = 0; a < k_; ++a) {
    if (a) os << ';';
    for (int b = 0; b < k_; ++b) os << (b ? "," : "") << (adj_[a][b] ? 1 : 0);
  }
  spec_ = os.str();
}

ShiftSpace ShiftSpace::full(int k, Rational lambda) {
  ShiftSpace s(k, std::vector<std::vector<bool>>(static_cast<std::size_t>(k), std::vector<bool>(static_cast<std::size_t>(k), true)),
               std::move(lambda));
  s.spec_ = "full" + std::to_string(k);
  return s;
}

ShiftSpace ShiftSpace::parse(std::string_view spec, Rational lambda) {
  const std::string t = trim(spec);
  if (t.rfind("full", 0) == 0) {
    const std::string n = t.substr(4);
    if (n.empty() || !std::all_of(n.begin(), n.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw Error(ErrorCode::invalid_argument, "bad shift spec '" + t + "'");
    }
    return full(std::stoi(n), std::move(lambda));
  }
  std::vector<std::vector<bool>> adj;
  std::stringstream rows(t);
  std::string row;
  while (std::getline(rows, row, ';')) {
    std::vector<bool> r;
    std::stringstream cells(row);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      const std::string c = trim(cell);
      if (c != "0" && c != "1") throw Error(ErrorCode::invalid_argument, "adjacency entries must be 0 or 1");
      r.push_back(c == "1");
    }
    adj.push_back(std::move(r));
  }
  const int k = static_cast<int>(adj.size());
  return ShiftSpace(k, std::move(adj), std::move(lambda));
}

Rational ShiftSpace::lambda_power(long n) const {
  const unsigned long e = static_cast<unsigned long>(n < 0 ? -n : n);
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), lambda_.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), lambda_.get_den_mpz_t(), e);
  Rational q = n >= 0 ? Rational(den, num) : Rational(num, den);
  q.canonicalize();
  return q;
}

ShiftPoint::ShiftPoint(const ShiftSpace& space, Word left_tail, Word core, long offset, Word right_tail)
    : left_(std::move(left_tail)), core_(std::move(core)), right_(std::move(right_tail)), offset_(offset) {
  if (left_.empty() || right_.empty()) throw Error(ErrorCode::invalid_argument, "tails must be non-empty");
  auto check = [&](const Word& w) {
    for (int a : w) {
      if (a < 0 || a >= space.alphabet_size()) throw Error(ErrorCode::invalid_argument, "symbol out of range");
    }
  };
  check(left_);
  check(core_);
  check(right_);
  normalize();
  const long p = static_cast<long>(left_.size());
  const long q = static_cast<long>(right_.size());
  for (long k = offset_ - p - 1; k <= right_begin() + q; ++k) {
    if (!space.admits(at(k), at(k + 1))) {
      throw Error(ErrorCode::invalid_argument,
                  "inadmissible transition " + std::to_string(at(k)) + "->" + std::to_string(at(k + 1)) + " at " +
                      std::to_string(k) + " in " + to_string());
    }
  }
}

ShiftPoint ShiftPoint::constant(const ShiftSpace& space, int symbol) {
  return ShiftPoint(space, Word{symbol}, Word{}, 0, Word{symbol});
}

ShiftPoint ShiftPoint::parse(const ShiftSpace& space, std::string_view text) {
  const std::string t = trim(text);
  const auto b1 = t.find('|');
  const auto b2 = t.find('|', b1 == std::string::npos ? 0 : b1 + 1);
  if (b1 == std::string::npos || b2 == std::string::npos) {
    throw Error(ErrorCode::invalid_argument, "shift point must look like 'left|core@offset|right': " + t);
  }
  const std::string middle = t.substr(b1 + 1, b2 - b1 - 1);
  const auto at_sign = middle.find('@');
  if (at_sign == std::string::npos) throw Error(ErrorCode::invalid_argument, "missing '@offset' in " + t);
  long offset = 0;
  try {
    offset = std::stol(middle.substr(at_sign + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::invalid_argument, "bad offset in " + t);
  }
  return ShiftPoint(space, parse_word(t.substr(0, b1)), parse_word(middle.substr(0, at_sign)), offset,
                    parse_word(t.substr(b2 + 1)));
}

int ShiftPoint::at(long k) const {
  const long p = static_cast<long>(left_.size());
  const long q = static_cast<long>(right_.size());
  if (k < offset_) return left_[static_cast<std::size_t>(floor_mod(k - offset_, p))];
  const long rb = right_begin();
  if (k >= rb) return right_[static_cast<std::size_t>(floor_mod(k - rb, q))];
  return core_[static_cast<std::size_t>(k - offset_)];
}

void ShiftPoint::normalize() {
  left_ = primitive_root(left_);
  right_ = primitive_root(right_);
  const long p = static_cast<long>(left_.size());
  const long q = static_cast<long>(right_.size());
  const long rb0 = right_begin();

  // Right periodic region starts at b; left periodic region ends at a.
  long b = rb0;
  bool periodic = false;
  while (at(b - 1) == at(b - 1 + q)) {
    --b;
    if (b <= offset_ - p - q) {
      periodic = true;
      break;
    }
  }
  if (periodic) {
    Word period(static_cast<std::size_t>(q));
    for (long j = 0; j < q; ++j) period[static_cast<std::size_t>(j)] = at(j);
    left_ = period;
    right_ = std::move(period);
    core_.clear();
    offset_ = 0;
    periodic_ = true;
    return;
  }
  long a = offset_ - 1;
  while (at(a + 1) == at(a + 1 - p)) ++a;

  const long start = a + 1;
  const long end = std::max(b, start);
  Word left(static_cast<std::size_t>(p));
  Word right(static_cast<std::size_t>(q));
  Word core;
  for (long j = 0; j < p; ++j) left[static_cast<std::size_t>(j)] = at(start - p + j);
  for (long j = 0; j < q; ++j) right[static_cast<std::size_t>(j)] = at(end + j);
  for (long k = start; k < end; ++k) core.push_back(at(k));
  left_ = std::move(left);
  right_ = std::move(right);
  core_ = std::move(core);
  offset_ = start;
  periodic_ = false;
}

std::string ShiftPoint::to_string() const {
  return word_string(left_) + "|" + word_string(core_) + "@" + std::to_string(offset_) + "|" + word_string(right_);
}

ShiftPoint ShiftPoint::shifted(long k) const {
  if (k == 0) return *this;
  ShiftPoint out = *this;
  out.offset_ -= k;
  out.normalize();
  return out;
}

ShiftPoint ShiftPoint::splice(const ShiftSpace& space, const ShiftPoint& past, const ShiftPoint& future, long cut) {
  const long lo = std::min(past.offset(), cut);
  const long hi = std::max(future.right_begin(), cut);
  const long p = static_cast<long>(past.left_.size());
  const long q = static_cast<long>(future.right_.size());
  Word left(static_cast<std::size_t>(p));
  Word right(static_cast<std::size_t>(q));
  Word core;
  for (long j = 0; j < p; ++j) left[static_cast<std::size_t>(j)] = past.at(lo - p + j);
  for (long k = lo; k < cut; ++k) core.push_back(past.at(k));
  for (long k = cut; k < hi; ++k) core.push_back(future.at(k));
  for (long j = 0; j < q; ++j) right[static_cast<std::size_t>(j)] = future.at(hi + j);
  return ShiftPoint(space, std::move(left), std::move(core), lo, std::move(right));
}

namespace {

struct Window {
  long left_end;     // both points left-periodic on (-inf, left_end)
  long left_period;  // common period there
  long right_begin;  // both points right-periodic on [right_begin, inf)
  long right_period;
};

Window common_window(const ShiftPoint& x, const ShiftPoint& y) {
  return Window{std::min(x.offset(), y.offset()),
                lcm_long(static_cast<long>(x.left_tail().size()), static_cast<long>(y.left_tail().size())),
                std::max(x.right_begin(), y.right_begin()),
                lcm_long(static_cast<long>(x.right_tail().size()), static_cast<long>(y.right_tail().size()))};
}

}  // namespace

std::optional<long> first_difference(const ShiftPoint& x, const ShiftPoint& y) {
  const Window w = common_window(x, y);
  const long reach = std::max(std::abs(w.left_end) + w.left_period, std::abs(w.right_begin) + w.right_period);
  for (long n = 0; n <= reach; ++n) {
    if (x.at(-n) != y.at(-n)) return -n;
    if (x.at(n) != y.at(n)) return n;
  }
  return std::nullopt;
}

std::optional<long> last_difference(const ShiftPoint& x, const ShiftPoint& y) {
  const Window w = common_window(x, y);
  for (long k = w.right_begin; k < w.right_begin + w.right_period; ++k) {
    if (x.at(k) != y.at(k)) {
      throw Error(ErrorCode::not_same_leaf, x.to_string() + " and " + y.to_string() + " differ at arbitrarily large coordinates");
    }
  }
  for (long k = w.right_begin - 1; k >= w.left_end - w.left_period; --k) {
    if (x.at(k) != y.at(k)) return k;
  }
  return std::nullopt;
}

std::optional<long> earliest_difference(const ShiftPoint& x, const ShiftPoint& y) {
  const Window w = common_window(x, y);
  for (long k = w.left_end - w.left_period; k < w.left_end; ++k) {
    if (x.at(k) != y.at(k)) {
      throw Error(ErrorCode::not_same_leaf,
                  x.to_string() + " and " + y.to_string() + " differ at arbitrarily negative coordinates");
    }
  }
  for (long k = w.left_end; k < w.right_begin + w.right_period; ++k) {
    if (x.at(k) != y.at(k)) return k;
  }
  return std::nullopt;
}

Rational base_distance(const ShiftSpace& space, const ShiftPoint& x, const ShiftPoint& y) {
  const auto n = first_difference(x, y);
  if (!n) return Rational(0);
  return space.lambda_power(std::abs(*n));
}

ShiftPoint shift_iterate(const ShiftPoint& x, long k) { return x.shifted(k); }

ShiftPoint bracket_shift(const ShiftSpace& space, const ShiftPoint& x, const ShiftPoint& y) {
  if (x.at(0) != y.at(0)) {
    throw Error(ErrorCode::too_far_apart, "bracket needs x_0 = y_0 (distance <= 1/lambda)");
  }
  return ShiftPoint::splice(space, y, x, 0);
}

long n_first_iterate(const ShiftPoint& y, const ShiftPoint& z, Leaf direction) {
  if (direction == Leaf::stable) {
    const auto d = last_difference(y, z);
    return d ? std::max(0L, *d + 1) : 0L;
  }
  const auto f = earliest_difference(y, z);
  return f ? std::max(0L, 1 - *f) : 0L;
}

bool in_local_leaf(const ShiftPoint& y, const ShiftPoint& z, Leaf direction) {
  try {
    return n_first_iterate(y, z, direction) == 0;
  } catch (const Error&) {
    return false;
  }
}

namespace {

int random_successor(const ShiftSpace& space, CounterRng& rng, int a, int avoid = -1) {
  std::vector<int> options;
  for (int b = 0; b < space.alphabet_size(); ++b) {
    if (space.admits(a, b) && b != avoid) options.push_back(b);
  }
  if (options.empty()) return random_successor(space, rng, a);
  return options[rng.below(options.size())];
}

int random_predecessor(const ShiftSpace& space, CounterRng& rng, int b, int avoid = -1) {
  std::vector<int> options;
  for (int a = 0; a < space.alphabet_size(); ++a) {
    if (space.admits(a, b) && a != avoid) options.push_back(a);
  }
  if (options.empty()) return random_predecessor(space, rng, b);
  return options[rng.below(options.size())];
}

/// Walks from `from` until a symbol repeats. Returns (transient, cycle):
/// the symbols after `from` are transient, then cycle repeated forever.
std::pair<Word, Word> close_walk(const ShiftSpace& space, CounterRng& rng, int from, bool forward) {
  Word seq{from};
  std::map<int, std::size_t> seen{{from, 0}};
  for (;;) {
    const int next = forward ? random_successor(space, rng, seq.back()) : random_predecessor(space, rng, seq.back());
    const auto it = seen.find(next);
    if (it != seen.end()) {
      const std::size_t i = it->second;
      if (i == 0) return {Word(seq.begin() + 1, seq.end()), seq};
      return {Word(seq.begin() + 1, seq.begin() + static_cast<long>(i)), Word(seq.begin() + static_cast<long>(i), seq.end())};
    }
    seen.emplace(next, seq.size());
    seq.push_back(next);
  }
}

/// Point whose coordinates from `start` onward follow `word` and then a
/// random forward continuation; the past is a random backward continuation.
ShiftPoint close_off(const ShiftSpace& space, CounterRng& rng, const Word& word, long start) {
  auto [fwd_transient, fwd_cycle] = close_walk(space, rng, word.back(), true);
  auto [bwd_transient, bwd_cycle] = close_walk(space, rng, word.front(), false);
  // Backward transient/cycle are listed in walking order (reverse time).
  std::reverse(bwd_transient.begin(), bwd_transient.end());
  std::reverse(bwd_cycle.begin(), bwd_cycle.end());
  Word core = bwd_transient;
  core.insert(core.end(), word.begin(), word.end());
  core.insert(core.end(), fwd_transient.begin(), fwd_transient.end());
  return ShiftPoint(space, bwd_cycle, core, start - static_cast<long>(bwd_transient.size()), fwd_cycle);
}

}  // namespace

ShiftPoint random_shift_point(const ShiftSpace& space, CounterRng& rng, int max_core) {
  const int len = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, max_core))));
  Word w{static_cast<int>(rng.below(static_cast<std::uint64_t>(space.alphabet_size())))};
  while (static_cast<int>(w.size()) < len) w.push_back(random_successor(space, rng, w.back()));
  return close_off(space, rng, w, -static_cast<long>(max_core / 2));
}

ShiftPoint random_past_variant(const ShiftSpace& space, CounterRng& rng, const ShiftPoint& x, long cut) {
  Word w{random_predecessor(space, rng, x.at(cut), x.at(cut - 1))};
  const int extra = static_cast<int>(rng.below(8));
  for (int i = 0; i < extra; ++i) w.insert(w.begin(), random_predecessor(space, rng, w.front()));
  w.push_back(x.at(cut));
  const ShiftPoint past = close_off(space, rng, w, cut - static_cast<long>(w.size()) + 1);
  return ShiftPoint::splice(space, past, x, cut);
}

ShiftPoint random_future_variant(const ShiftSpace& space, CounterRng& rng, const ShiftPoint& x, long cut) {
  Word w{x.at(cut), random_successor(space, rng, x.at(cut), x.at(cut + 1))};
  const int extra = static_cast<int>(rng.below(8));
  for (int i = 0; i < extra; ++i) w.push_back(random_successor(space, rng, w.back()));
  const ShiftPoint future = close_off(space, rng, w, cut);
  return ShiftPoint::splice(space, x, future, cut + 1);
}

}  // namespace hlab
