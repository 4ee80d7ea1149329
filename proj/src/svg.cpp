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

#include "holonomy_lab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "holonomy_lab/error.hpp"

namespace hlab {

namespace {

constexpr double kSize = 600.0;
constexpr double kMargin = 40.0;
constexpr std::size_t kMaxPathNodes = 64;
constexpr std::size_t kMaxLines = 48;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string header(const std::string& version, double width, double height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!-- holonomy-lab " + version +
         " -->\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n" +
         "<style>.stable{stroke-width:0.6;fill:none}.unstable{stroke-width:0.6;fill:none}"
         ".boundary{stroke:#000;stroke-width:2;fill:none}.axis{stroke:#444;stroke-width:1;fill:none}"
         "text{font-family:sans-serif;font-size:11px}</style>\n";
}

double px(double x) { return kMargin + x * (kSize - 2 * kMargin); }
double py(double y) { return kSize - kMargin - y * (kSize - 2 * kMargin); }

std::string polyline(const Polyline2& p, const std::string& cls, const std::string& stroke = {}) {
  std::string out = "<polyline class=\"" + cls + "\"";
  if (!stroke.empty()) out += " stroke=\"" + stroke + "\"";
  out += " points=\"";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ' ';
    out += num(px(p[i][0])) + "," + num(py(p[i][1]));
  }
  return out + "\"/>\n";
}

std::string axes() {
  std::string out = "<g class=\"axes\">\n<rect class=\"axis\" x=\"" + num(px(0)) + "\" y=\"" + num(py(1)) +
                    "\" width=\"" + num(px(1) - px(0)) + "\" height=\"" + num(py(0) - py(1)) + "\"/>\n";
  for (double t : {0.0, 0.5, 1.0}) {
    out += "<text x=\"" + num(px(t) - 6) + "\" y=\"" + num(py(0) + 16) + "\">" + num(t).substr(0, 3) + "</text>\n";
    out += "<text x=\"" + num(px(0) - 30) + "\" y=\"" + num(py(t) + 4) + "\">" + num(t).substr(0, 3) + "</text>\n";
  }
  return out + "</g>\n";
}

std::string wrapped(const std::vector<Point2>& path, const std::string& cls, const std::string& stroke = {}) {
  std::string out;
  for (const auto& piece : wrap_path(path)) out += polyline(piece, cls, stroke);
  return out;
}

/// Evenly spaced indices in [0, n), always including both ends.
std::vector<std::size_t> thin(std::size_t n, std::size_t keep) {
  std::vector<std::size_t> out;
  if (n == 0) return out;
  if (n <= keep) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  for (std::size_t k = 0; k < keep; ++k) out.push_back(k * (n - 1) / (keep - 1));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Point2 lift2(const TorusLeafPoint& p) { return {p.lift()[0], p.lift()[1]}; }

}  // namespace

std::vector<Polyline2> wrap_path(const std::vector<Point2>& lift_path) {
  std::vector<Polyline2> out;
  std::array<double, 2> cell{};
  bool open = false;
  auto add = [&](const Point2& a, const Point2& b) {
    const Point2 mid{(a[0] + b[0]) / 2, (a[1] + b[1]) / 2};
    const std::array<double, 2> c{std::floor(mid[0]), std::floor(mid[1])};
    const Point2 ra{a[0] - c[0], a[1] - c[1]};
    const Point2 rb{b[0] - c[0], b[1] - c[1]};
    if (!open || c != cell) {
      out.push_back({ra});
      cell = c;
      open = true;
    }
    out.back().push_back(rb);
  };
  if (lift_path.size() == 1) {
    const Point2& p = lift_path.front();
    out.push_back({{p[0] - std::floor(p[0]), p[1] - std::floor(p[1])}});
    return out;
  }
  for (std::size_t e = 0; e + 1 < lift_path.size(); ++e) {
    const Point2 a = lift_path[e];
    const Point2 b = lift_path[e + 1];
    std::vector<double> ts{0.0, 1.0};
    for (int d = 0; d < 2; ++d) {
      const double lo = std::min(a[d], b[d]);
      const double hi = std::max(a[d], b[d]);
      for (double k = std::floor(lo) + 1; k < hi; k += 1.0) ts.push_back((k - a[d]) / (b[d] - a[d]));
    }
    std::sort(ts.begin(), ts.end());
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      if (ts[i + 1] - ts[i] <= 1e-15) continue;
      auto at = [&](double t) { return Point2{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])}; };
      add(at(ts[i]), at(ts[i + 1]));
    }
  }
  return out;
}

std::string render_rectangle_svg(const TorusSystem& system, const SURectangle& g, const std::string& version) {
  if (system.dim() != 2) {
    throw Error(ErrorCode::unsupported_dimension, "geometric plots need a 2-D torus, got n = " + std::to_string(system.dim()));
  }
  std::string out = header(version, kSize, kSize) + axes();
  if (g.empty()) return out + "</svg>\n";

  auto row_path = [&](std::size_t j) {
    std::vector<Point2> p;
    for (std::size_t i : thin(g.nu(), kMaxPathNodes)) p.push_back(lift2(g.node(i, j)));
    return p;
  };
  auto column_path = [&](std::size_t i, std::size_t j0, std::size_t j1) {
    std::vector<Point2> p;
    for (std::size_t j = j0; j <= j1; ++j) p.push_back(lift2(g.node(i, j)));
    return p;
  };

  // Band b covers stable intervals whose provenance is stage b.
  std::size_t j = 0;
  const std::size_t intervals = g.provenance.size();
  std::size_t band_rows = std::max<std::size_t>(1, intervals / kMaxLines + 1);
  while (j < intervals) {
    const int stage = g.provenance[j];
    std::size_t end = j;
    while (end < intervals && g.provenance[end] == stage) ++end;
    const std::string color = kPalette[static_cast<std::size_t>(stage - 1) % std::size(kPalette)];
    out += "<g class=\"band\" data-stage=\"" + std::to_string(stage) + "\">\n";
    for (std::size_t r = j; r <= end; r += band_rows) out += wrapped(row_path(r), "unstable", color);
    for (std::size_t i : thin(g.nu(), 12)) out += wrapped(column_path(i, j, end), "stable", color);
    out += "</g>\n";
    j = end;
  }
  if (intervals == 0) out += wrapped(row_path(0), "unstable", kPalette[0]);

  out += "<g class=\"outline\">\n";
  out += wrapped(row_path(0), "boundary");
  if (g.ns() > 1) out += wrapped(row_path(g.ns() - 1), "boundary");
  out += wrapped(column_path(0, 0, g.ns() - 1), "boundary");
  if (g.nu() > 1) out += wrapped(column_path(g.nu() - 1, 0, g.ns() - 1), "boundary");
  out += "</g>\n</svg>\n";
  return out;
}

std::string render_decay_svg(const TransitivityWitness& w, double lambda, const std::string& version) {
  const double width = 640.0;
  const double height = 400.0;
  std::string out = header(version, width, height);
  const int nmax = w.table.empty() ? 0 : w.table.back().n;
  const double ymin = -std::max(1.0, nmax * std::log10(lambda));
  auto X = [&](double n) { return 50.0 + (nmax > 0 ? n / nmax : 0.0) * (width - 80.0); };
  auto Y = [&](double v) { return 20.0 + (v / ymin) * (height - 60.0); };
  out += "<g class=\"axes\">\n<polyline class=\"axis\" points=\"" + num(X(0)) + "," + num(Y(0)) + " " + num(X(0)) + "," +
         num(Y(ymin)) + " " + num(X(nmax)) + "," + num(Y(ymin)) + "\"/>\n";
  out += "<text x=\"" + num(X(nmax) - 10) + "\" y=\"" + num(Y(ymin) + 16) + "\">n = " + std::to_string(nmax) + "</text>\n";
  out += "<text x=\"4\" y=\"" + num(Y(0) + 4) + "\">0</text>\n";
  out += "<text x=\"4\" y=\"" + num(Y(ymin) + 4) + "\">" + num(ymin) + "</text>\n</g>\n";

  auto series = [&](const std::string& cls, const std::string& color, auto value) {
    std::string pts;
    for (const auto& r : w.table) {
      const double v = value(r);
      if (!(v > 0.0) || !std::isfinite(v)) continue;
      if (!pts.empty()) pts += ' ';
      pts += num(X(r.n)) + "," + num(Y(std::max(ymin, std::log10(v))));
    }
    if (pts.empty()) return std::string();
    return "<polyline class=\"" + cls + "\" stroke=\"" + color + "\" fill=\"none\" points=\"" + pts + "\"/>\n";
  };
  const double f0 = w.table.empty() ? 0.0 : w.table.front().forward_gauge;
  const double b0 = w.table.empty() ? 0.0 : w.table.front().backward_gauge;
  out += series("expected", "#7f7f7f", [](const DecayRow& r) { return r.expected; });
  out += series("forward", "#1f77b4", [&](const DecayRow& r) { return f0 > 0.0 ? r.forward_gauge / f0 : 0.0; });
  out += series("backward", "#d62728", [&](const DecayRow& r) { return b0 > 0.0 ? r.backward_gauge / b0 : 0.0; });
  return out + "</svg>\n";
}

}  // namespace hlab
