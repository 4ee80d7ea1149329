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

#include "holonomy_lab/audits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "holonomy_lab/error.hpp"

namespace hlab {

namespace {

constexpr int kMaxPower = 20;

std::string vec_string(const Vec& v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

double rel(double measured, double expected) {
  if (expected == 0.0) return std::abs(measured);
  return std::abs(measured - expected) / std::abs(expected);
}

Rational rel_exact(const Rational& measured, const Rational& expected) {
  if (expected == 0) return abs(measured);
  return abs(measured - expected) / abs(expected);
}

AuditReport make_report(std::string kind, std::string model, long samples, double threshold) {
  AuditReport r;
  r.kind = std::move(kind);
  r.model = std::move(model);
  r.samples = samples;
  r.threshold = threshold;
  return r;
}

Leaf leaf_of(long i) { return i % 2 == 0 ? Leaf::stable : Leaf::unstable; }

}  // namespace

TorusLeafPoint random_torus_point(const TorusSystem& system, CounterRng& rng) {
  Vec lift(static_cast<Eigen::Index>(system.dim()));
  for (Eigen::Index i = 0; i < lift.size(); ++i) lift[i] = rng.uniform();
  return system.point(lift);
}

Vec random_bundle_vector(const TorusSystem& system, CounterRng& rng, Leaf leaf, double gauge) {
  const auto& s = system.splitting();
  Vec c = Vec::Zero(static_cast<Eigen::Index>(s.dim()));
  const std::size_t first = s.first_column(leaf);
  const std::size_t count = s.end_column(leaf) - first;
  const std::size_t lead = first + static_cast<std::size_t>(rng.below(count));
  for (std::size_t i = first; i < s.end_column(leaf); ++i) {
    const double g = i == lead ? gauge : gauge * rng.uniform();
    const double sign = rng.below(2) ? 1.0 : -1.0;
    c[static_cast<Eigen::Index>(i)] = sign * std::pow(g, 1.0 / s.exponents[i]);
  }
  return c;
}

namespace detail {

std::vector<Sample> run_parallel(long n, const std::function<Sample(long)>& fn) {
  std::vector<Sample> out(static_cast<std::size_t>(std::max(0L, n)));
  if (n <= 0) return out;
  const long workers = std::clamp<long>(static_cast<long>(std::thread::hardware_concurrency()), 1, 8);
  const long chunk = (n + workers - 1) / workers;
  auto body = [&](long lo, long hi) {
    for (long i = lo; i < hi; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = fn(i);
      } catch (const std::exception& e) {
        out[static_cast<std::size_t>(i)] = Sample{std::numeric_limits<double>::infinity(), false,
                                                  "sample " + std::to_string(i) + ": " + e.what()};
      }
    }
  };
  std::vector<std::thread> pool;
  for (long lo = 0; lo < n; lo += chunk) pool.emplace_back(body, lo, std::min(n, lo + chunk));
  for (auto& t : pool) t.join();
  return out;
}

AuditReport reduce(AuditReport base, const std::vector<Sample>& samples) {
  base.samples = static_cast<long>(samples.size());
  base.pass = true;
  long worst = -1;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!samples[i].ok) base.pass = false;
    if (worst < 0 || samples[i].value > samples[static_cast<std::size_t>(worst)].value) worst = static_cast<long>(i);
  }
  if (worst >= 0) {
    base.worst_value = samples[static_cast<std::size_t>(worst)].value;
    base.worst_witness = samples[static_cast<std::size_t>(worst)].witness;
  }
  return base;
}

}  // namespace detail

using detail::Sample;

AuditReport conformality_audit(const ShiftConformalStructure& cs, long sample_count, std::uint64_t seed) {
  const ShiftSpace& space = cs.space();
  auto fn = [&](long i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const Leaf leaf = leaf_of(i);
    const ShiftPoint x = random_shift_point(space, rng);
    const long depth = rng.between(1, 24);
    const ShiftPoint y = leaf == Leaf::stable ? random_past_variant(space, rng, x, 1 - depth)
                                              : random_future_variant(space, rng, x, depth - 1);
    const Rational d0 = cs.base_distance(y, x);
    Rational worst = 0;
    int worst_k = 0;
    for (int k = 1; k <= kMaxPower; ++k) {
      const long step = leaf == Leaf::stable ? k : -k;
      const Rational dk = cs.base_distance(shift_iterate(y, step), shift_iterate(x, step));
      const Rational v = rel_exact(space.lambda_power(-k) * dk, d0);
      if (v > worst) {
        worst = v;
        worst_k = k;
      }
    }
    return Sample{worst.get_d(), worst == 0,
                  std::string(leaf_name(leaf)) + " x=" + x.to_string() + " y=" + y.to_string() +
                      " d=" + d0.get_str() + " k=" + std::to_string(worst_k)};
  };
  return detail::reduce(make_report("conformality", "shift", sample_count, 0.0), detail::run_parallel(sample_count, fn));
}

AuditReport conformality_audit(const TorusConformalStructure& cs, long sample_count, std::uint64_t seed) {
  const TorusSystem& sys = cs.system();
  constexpr double kTol = 1e-10;
  auto fn = [&](long i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const Leaf leaf = leaf_of(i);
    const TorusLeafPoint x = random_torus_point(sys, rng);
    const double g = cs.xi() * std::pow(10.0, -3.0 * rng.uniform());
    const TorusLeafPoint y = sys.translate(x, random_bundle_vector(sys, rng, leaf, g));
    const double d0 = cs.base_distance(x, y);
    double worst = 0.0;
    int worst_k = 0;
    for (int k = 1; k <= kMaxPower; ++k) {
      const int step = leaf == Leaf::stable ? k : -k;
      const double dk = cs.base_distance(sys.iterate(x, step), sys.iterate(y, step));
      const double v = rel(std::pow(cs.lambda(), k) * dk, d0);
      if (v > worst) {
        worst = v;
        worst_k = k;
      }
    }
    return Sample{worst, worst <= kTol,
                  std::string(leaf_name(leaf)) + " x=" + vec_string(x.lift()) + " y=" + vec_string(y.lift()) +
                      " k=" + std::to_string(worst_k)};
  };
  return detail::reduce(make_report("conformality", "torus", sample_count, kTol), detail::run_parallel(sample_count, fn));
}

AuditReport leaf_conformality_audit(const ShiftConformalStructure& cs, long sample_count, std::uint64_t seed) {
  const ShiftSpace& space = cs.space();
  auto fn = [&](long i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const Leaf leaf = leaf_of(i);
    const ShiftPoint x = random_shift_point(space, rng);
    auto variant = [&](const ShiftPoint& p) {
      const long cut = rng.between(-8, 8);
      return leaf == Leaf::stable ? random_past_variant(space, rng, p, cut) : random_future_variant(space, rng, p, cut);
    };
    const ShiftPoint y = variant(x);
    const ShiftPoint z = rng.below(2) ? variant(x) : variant(y);
    auto d = [&](const ShiftPoint& a, const ShiftPoint& b) { return cs.leaf_distance(a, b, leaf).value; };
    const Rational dxy = d(x, y);
    const std::string tag = std::string(leaf_name(leaf)) + " x=" + x.to_string() + " y=" + y.to_string();
    if (dxy != d(y, x)) return Sample{1.0, false, "asymmetric " + tag};
    if ((dxy == 0) != (x == y) || d(x, x) != 0) return Sample{1.0, false, "positivity " + tag};
    if (d(x, z) > dxy + d(y, z)) return Sample{1.0, false, "triangle " + tag + " z=" + z.to_string()};
    Rational worst = 0;
    for (int k = 1; k <= kMaxPower; ++k) {
      const long step = leaf == Leaf::stable ? k : -k;
      const Rational dk = d(shift_iterate(x, step), shift_iterate(y, step));
      worst = std::max(worst, rel_exact(dk, space.lambda_power(k) * dxy));
    }
    return Sample{worst.get_d(), worst == 0, tag};
  };
  return detail::reduce(make_report("leaf_conformality", "shift", sample_count, 0.0),
                        detail::run_parallel(sample_count, fn));
}

AuditReport leaf_conformality_audit(const TorusConformalStructure& cs, long sample_count, std::uint64_t seed) {
  const TorusSystem& sys = cs.system();
  constexpr double kTol = 1e-10;
  auto fn = [&](long i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const Leaf leaf = leaf_of(i);
    const TorusLeafPoint x = random_torus_point(sys, rng);
    const TorusLeafPoint y = sys.translate(x, random_bundle_vector(sys, rng, leaf, rng.uniform(0.01, 0.5)));
    const TorusLeafPoint z = sys.translate(y, random_bundle_vector(sys, rng, leaf, rng.uniform(0.01, 0.5)));
    auto d = [&](const TorusLeafPoint& a, const TorusLeafPoint& b) { return cs.leaf_distance(a, b, leaf).value; };
    const double dxy = d(x, y);
    const std::string tag = std::string(leaf_name(leaf)) + " x=" + vec_string(x.lift()) + " y=" + vec_string(y.lift());
    if (rel(d(y, x), dxy) > kTol) return Sample{1.0, false, "asymmetric " + tag};
    if (!(dxy > 0.0) || d(x, x) != 0.0) return Sample{1.0, false, "positivity " + tag};
    const auto& s = sys.splitting();
    const bool linear = std::all_of(s.exponents.begin() + static_cast<long>(s.first_column(leaf)),
                                    s.exponents.begin() + static_cast<long>(s.end_column(leaf)),
                                    [](double e) { return e == 1.0; });
    if (linear && d(x, z) > (dxy + d(y, z)) * (1.0 + kTol)) return Sample{1.0, false, "triangle " + tag};
    double worst = 0.0;
    for (int k = 1; k <= kMaxPower; ++k) {
      const int step = leaf == Leaf::stable ? k : -k;
      const double dk = d(sys.iterate(x, step), sys.iterate(y, step));
      worst = std::max(worst, rel(dk, std::pow(cs.lambda(), -k) * dxy));
    }
    return Sample{worst, worst <= kTol, tag};
  };
  return detail::reduce(make_report("leaf_conformality", "torus", sample_count, kTol),
                        detail::run_parallel(sample_count, fn));
}

AuditReport metric_audit(const ShiftConformalStructure& cs, long sample_count, std::uint64_t seed) {
  const ShiftSpace& space = cs.space();
  auto fn = [&](long i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const ShiftPoint x = random_shift_point(space, rng);
    auto variant = [&](const ShiftPoint& p) {
      const long cut = rng.between(-10, 10);
      return rng.below(2) ? random_past_variant(space, rng, p, cut) : random_future_variant(space, rng, p, cut);
    };
    const ShiftPoint y = variant(x);
    const ShiftPoint z = rng.below(2) ? variant(y) : variant(x);
    const Rational den = cs.base_distance(x, y) + cs.base_distance(y, z);
    if (den == 0) return Sample{0.0, true, ""};
    const Rational defect = cs.base_distance(x, z) / den;
    return Sample{defect.get_d(), defect <= 1,
                  "x=" + x.to_string() + " y=" + y.to_string() + " z=" + z.to_string()};
  };
  return detail::reduce(make_report("metric", "shift", sample_count, 1.0), detail::run_parallel(sample_count, fn));
}

AuditReport metric_audit(const TorusConformalStructure& cs, long sample_count, std::uint64_t seed) {
  const TorusSystem& sys = cs.system();
  const auto& s = sys.splitting();
  constexpr double kSlack = 1e-12;
  auto defect = [&](const TorusLeafPoint& x, const TorusLeafPoint& y, const TorusLeafPoint& z) {
    const double den = cs.base_distance(x, y) + cs.base_distance(y, z);
    return den > 0.0 ? cs.base_distance(x, z) / den : 0.0;
  };
  auto fn = [&](long i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const TorusLeafPoint x = random_torus_point(sys, rng);
    const Leaf leaf = rng.below(2) ? Leaf::stable : Leaf::unstable;
    if (i % 2 == 0) {
      const auto line = static_cast<Eigen::Index>((i / 2) % static_cast<long>(s.dim()));
      Vec a = Vec::Zero(static_cast<Eigen::Index>(s.dim()));
      a[line] = 0.1 * (0.5 + 0.5 * rng.uniform()) * (rng.below(2) ? 1.0 : -1.0);
      const double v = defect(x, sys.translate(x, a), sys.translate(x, 2.0 * a));
      return Sample{v, v <= 1.0 + kSlack, "collinear line " + std::to_string(line) + " x=" + vec_string(x.lift())};
    }
    const TorusLeafPoint y = sys.translate(x, random_bundle_vector(sys, rng, leaf, 0.5 * cs.xi() * rng.uniform()));
    const TorusLeafPoint z = sys.translate(y, random_bundle_vector(sys, rng, leaf, 0.5 * cs.xi() * rng.uniform()));
    const double v = defect(x, y, z);
    return Sample{v, v <= 1.0 + kSlack, std::string(leaf_name(leaf)) + " triple x=" + vec_string(x.lift())};
  };
  AuditReport r = detail::reduce(make_report("metric", "torus", sample_count, 1.0), detail::run_parallel(sample_count, fn));
  double collinear_max = 0.0;
  const TorusLeafPoint origin = sys.point(Vec::Zero(static_cast<Eigen::Index>(s.dim())));
  for (std::size_t line = 0; line < s.dim(); ++line) {
    Vec a = Vec::Zero(static_cast<Eigen::Index>(s.dim()));
    a[static_cast<Eigen::Index>(line)] = 0.1;
    const double v = defect(origin, sys.translate(origin, a), sys.translate(origin, 2.0 * a));
    collinear_max = std::max(collinear_max, v);
    r.details.emplace_back("collinear_defect_line_" + std::to_string(line), v);
  }
  r.details.emplace_back("collinear_defect_max", collinear_max);
  return r;
}

AuditReport holder_equivalence_audit(const RhoGauge& gauge, long sample_count, std::uint64_t seed) {
  const auto& s = gauge.splitting();
  const double L = gauge.holder_constant();
  const double beta = gauge.holder_exponent();
  const double radius = std::min(0.5, 0.5 / L);
  const double n = static_cast<double>(s.dim());
  constexpr double kSlack = 1e-12;
  auto fn = [&](long i) {
    if (i == 0) return Sample{0.0, gauge(Vec::Zero(static_cast<Eigen::Index>(s.dim()))) == 0.0, "v=0"};
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    Vec v(static_cast<Eigen::Index>(s.dim()));
    for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = rng.uniform(-1.0, 1.0);
    if (v.norm() == 0.0) v[0] = 1.0;
    v *= radius * std::pow(10.0, -6.0 * rng.uniform()) / v.norm();
    const double r = gauge(v);
    const double upper = r / (L * v.norm());
    const double lower = v.norm() / (n * std::pow(r, beta));
    const double worst = std::max(upper, lower);
    return Sample{worst, worst <= 1.0 + kSlack, "v=" + vec_string(v)};
  };
  AuditReport r = detail::reduce(make_report("holder_equivalence", "torus", sample_count, 1.0),
                                 detail::run_parallel(sample_count, fn));
  r.details = {{"L", L}, {"beta", beta}, {"radius", radius}};
  return r;
}

AuditReport rho_conformality_audit(const TorusSystem& sys, long sample_count, std::uint64_t seed) {
  const auto& s = sys.splitting();
  const RhoGauge gauge(s);
  constexpr double kTol = 1e-10;
  const auto n = static_cast<Eigen::Index>(s.dim());
  Mat forward(n, n);
  Mat backward(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      forward(i, j) = static_cast<double>(sys.matrix()(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
      backward(i, j) = static_cast<double>(sys.inverse_matrix()(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    }
  }
  auto fn = [&](long i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const Leaf leaf = leaf_of(i);
    const Vec v = s.basis * random_bundle_vector(sys, rng, leaf, std::pow(10.0, -3.0 * rng.uniform()));
    const Vec image = leaf == Leaf::stable ? Vec(forward * v) : Vec(backward * v);
    const double err = rel(s.lambda * gauge(image) / gauge(v), 1.0);
    return Sample{err, err <= kTol, std::string(leaf_name(leaf)) + " v=" + vec_string(v)};
  };
  return detail::reduce(make_report("rho_conformality", "torus", sample_count, kTol),
                        detail::run_parallel(sample_count, fn));
}

}  // namespace hlab
