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

#include "holonomy_lab/holonomy_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "holonomy_lab/error.hpp"

namespace hlab {

namespace {

constexpr double kRelTol = 1e-9;
constexpr double kResidualTol = 1e-9;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

/// l^u of row j between grid columns [i0, i1].
double row_length(const TorusConformalStructure& cs, const SURectangle& g, std::size_t j, std::size_t i0,
                  std::size_t i1) {
  const TorusSystem& sys = cs.system();
  double total = 0.0;
  for (std::size_t i = i0; i < i1; ++i) {
    const double dt = g.unstable_params[i + 1] - g.unstable_params[i];
    const Vec d = sys.bundle_part(sys.leaf_displacement(g.node(i, j), g.node(i + 1, j)), Leaf::unstable);
    total += dt * cs.gauge().of_eigen(d / dt);
  }
  return total;
}

double row_length(const TorusConformalStructure& cs, const SURectangle& g, std::size_t j) {
  return g.nu() < 2 ? 0.0 : row_length(cs, g, j, 0, g.nu() - 1);
}

double eigen_gap(const TorusLeafPoint& a, const TorusLeafPoint& b) {
  return (a.eigen_coords() - b.eigen_coords()).lpNorm<Eigen::Infinity>();
}

std::vector<double> merge_grid(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  for (double v : values) {
    if (out.empty() || v - out.back() > 1e-12 * std::max(1.0, std::abs(v))) out.push_back(v);
  }
  return out;
}

std::vector<double> interval_grid(const LeafCurve& curve, double a, double b, int pieces) {
  std::vector<double> values;
  for (int i = 0; i <= pieces; ++i) values.push_back(i == pieces ? b : a + (b - a) * i / pieces);
  for (double t : curve.breakpoints()) {
    if (t > a && t < b) values.push_back(t);
  }
  auto out = merge_grid(std::move(values));
  out.front() = a;
  out.back() = b;
  return out;
}

std::size_t nearest_index(const std::vector<double>& grid, double t) {
  const auto it = std::lower_bound(grid.begin(), grid.end(), t);
  std::size_t i = static_cast<std::size_t>(it - grid.begin());
  if (i == grid.size()) return grid.size() - 1;
  if (i > 0 && std::abs(grid[i - 1] - t) < std::abs(grid[i] - t)) --i;
  return i;
}

/// Parameters splitting the curve into pieces of rho-length `piece` (the
/// last one shorter), including both domain ends.
std::vector<double> length_params(const RhoGauge& gauge, const LeafCurve& curve, double piece, int count) {
  const auto& b = curve.breakpoints();
  std::vector<double> lengths;
  for (std::size_t p = 0; p < curve.piece_count(); ++p) {
    const double dt = b[p + 1] - b[p];
    lengths.push_back(dt * gauge.of_eigen(curve.pieces()[p] / dt));
  }
  std::vector<double> out{curve.begin()};
  double cum = 0.0;
  std::size_t p = 0;
  for (int m = 1; m < count; ++m) {
    const double target = piece * m;
    while (p < lengths.size() && cum + lengths[p] < target) cum += lengths[p++];
    if (p == lengths.size()) break;
    const double u = lengths[p] > 0.0 ? (target - cum) / lengths[p] : 0.0;
    out.push_back(b[p] + u * (b[p + 1] - b[p]));
  }
  out.push_back(curve.end());
  return merge_grid(out);
}

const TorusLeafPoint& top_row_node(const SURectangle& g, std::size_t i) { return g.node(i, g.ns() - 1); }

}  // namespace

std::vector<double> curve_grid(const LeafCurve& curve, int pieces) {
  if (pieces < 1) throw Error(ErrorCode::invalid_argument, "grid needs at least one cell");
  return interval_grid(curve, curve.begin(), curve.end(), pieces);
}

SURectangle local_rectangle(const TorusConformalStructure& cs, const LeafCurve& gamma_u, const LeafCurve& gamma_s,
                            const std::vector<double>& tgrid, const std::vector<double>& sgrid, double delta,
                            double eps, int stage) {
  if (gamma_u.leaf() != Leaf::unstable || gamma_s.leaf() != Leaf::stable) {
    throw Error(ErrorCode::invalid_argument, "local_rectangle needs an unstable and a stable curve");
  }
  if (tgrid.empty() || sgrid.empty()) throw Error(ErrorCode::invalid_argument, "empty rectangle grid");
  const TorusSystem& sys = cs.system();
  const TorusLeafPoint corner = gamma_s.at(sgrid.front());
  const double scale = std::max(1.0, corner.eigen_coords().lpNorm<Eigen::Infinity>());
  if (eigen_gap(gamma_u.at(tgrid.front()), corner) > 1e-10 * scale) {
    throw Error(ErrorCode::invalid_argument, "curves must share their initial point");
  }
  const double lu = rho_length_sum(cs.gauge(), gamma_u);
  if (lu > delta * (1.0 + kRelTol)) {
    throw Error(ErrorCode::too_large, "l^u(gamma_u) = " + fmt(lu) + " exceeds delta = " + fmt(delta));
  }
  std::vector<double> ds(sgrid.size(), 0.0);
  for (std::size_t j = 0; j < sgrid.size(); ++j) {
    ds[j] = cs.leaf_distance(corner, gamma_s.at(sgrid[j]), Leaf::stable).value;
    if (ds[j] > delta * (1.0 + kRelTol)) {
      throw Error(ErrorCode::too_large, "d^s(gamma_s(0), gamma_s(" + fmt(sgrid[j]) + ")) = " + fmt(ds[j]) +
                                            " exceeds delta = " + fmt(delta));
    }
  }

  SURectangle g;
  g.unstable_params = tgrid;
  g.stable_params = sgrid;
  g.nodes.reserve(tgrid.size() * sgrid.size());
  std::vector<TorusLeafPoint> base;
  base.reserve(tgrid.size());
  for (double t : tgrid) base.push_back(gamma_u.at(t));
  for (double s : sgrid) {
    const TorusLeafPoint column = gamma_s.at(s);
    for (const auto& u : base) {
      try {
        g.nodes.push_back(sys.bracket(u, column, cs.xi()));
      } catch (const Error& e) {
        throw Error(ErrorCode::too_large, std::string("rectangle leaves the product box: ") + e.what());
      }
    }
  }
  g.provenance.assign(sgrid.size() > 1 ? sgrid.size() - 1 : 0, stage);

  for (std::size_t j = 0; j < g.ns(); ++j) {
    const double lj = row_length(cs, g, j);
    if (lu > 0.0 && (lj < (1.0 - eps) * lu * (1.0 - kRelTol) || lj > (1.0 + eps) * lu * (1.0 + kRelTol))) {
      throw Error(ErrorCode::pseudo_isometry_violated,
                  "row " + std::to_string(j) + " length " + fmt(lj) + " vs l^u(gamma_u) = " + fmt(lu));
    }
    for (std::size_t i = 0; i < g.nu(); ++i) {
      const double dc = cs.leaf_distance(g.node(i, 0), g.node(i, j), Leaf::stable).value;
      if (dc > (1.0 + eps) * ds[j] * (1.0 + kRelTol) + 1e-15) {
        throw Error(ErrorCode::pseudo_isometry_violated,
                    "column d^s " + fmt(dc) + " exceeds (1+eps) * " + fmt(ds[j]) + " at node (" + std::to_string(i) +
                        "," + std::to_string(j) + ")");
      }
    }
  }
  return g;
}

SURectangle local_rectangle(const TorusConformalStructure& cs, const LeafCurve& gamma_u, const LeafCurve& gamma_s,
                            int unstable_grid, int stable_grid, double delta, double eps) {
  const auto tgrid = gamma_u.degenerate() ? std::vector<double>{gamma_u.begin()} : curve_grid(gamma_u, unstable_grid);
  const auto sgrid = gamma_s.degenerate() ? std::vector<double>{gamma_s.begin()} : curve_grid(gamma_s, stable_grid);
  return local_rectangle(cs, gamma_u, gamma_s, tgrid, sgrid, delta, eps, 1);
}

SURectangle glue_rectangles(const SURectangle& g1, const SURectangle& g2, double tolerance) {
  if (g1.empty()) return g2;
  if (g2.empty()) return g1;
  if (g1.nu() != g2.nu()) throw Error(ErrorCode::boundary_mismatch, "unstable grids differ in size");
  for (std::size_t i = 0; i < g1.nu(); ++i) {
    if (std::abs(g1.unstable_params[i] - g2.unstable_params[i]) > 1e-12) {
      throw Error(ErrorCode::boundary_mismatch, "unstable grids differ at column " + std::to_string(i));
    }
    const double gap = eigen_gap(top_row_node(g1, i), g2.node(i, 0));
    if (gap > tolerance) {
      throw Error(ErrorCode::boundary_mismatch,
                  "boundary nodes differ by " + fmt(gap) + " at column " + std::to_string(i));
    }
  }
  if (std::abs(g1.stable_params.back() - g2.stable_params.front()) > 1e-12) {
    throw Error(ErrorCode::boundary_mismatch, "stable parameters do not abut");
  }
  SURectangle out = g1;
  out.stable_params.insert(out.stable_params.end(), g2.stable_params.begin() + 1, g2.stable_params.end());
  out.nodes.insert(out.nodes.end(), g2.nodes.begin() + static_cast<long>(g2.nu()), g2.nodes.end());
  out.provenance.insert(out.provenance.end(), g2.provenance.begin(), g2.provenance.end());
  return out;
}

SURectangle iterate_rectangle(const TorusSystem& system, const SURectangle& g, int k) {
  SURectangle out = g;
  for (auto& p : out.nodes) p = system.iterate(p, k);
  return out;
}

namespace {

struct Renormalization {
  double stable_height = 0.0;
  double certified = 0.0;
  double residual = 0.0;
};

/// Pushes the glued rectangle forward by f^k, certifies every beta piece as
/// a local product sub-rectangle, and pulls the piece bounds back.
Renormalization renormalize(const TorusConformalStructure& cs, const SURectangle& g, int k,
                            const std::vector<std::size_t>& cuts, double delta, double eps) {
  const TorusSystem& sys = cs.system();
  const SURectangle pushed = iterate_rectangle(sys, g, k);
  const std::size_t top = pushed.ns() - 1;
  Renormalization r;
  for (std::size_t m = 0; m + 1 < cuts.size(); ++m) {
    const std::size_t a = cuts[m];
    const std::size_t b = cuts[m + 1];
    const std::string where = "piece " + std::to_string(m) + " at depth " + std::to_string(k);
    for (std::size_t i = a; i <= b; ++i) {
      const double h = cs.leaf_distance(pushed.node(i, 0), pushed.node(i, top), Leaf::stable).value;
      r.stable_height = std::max(r.stable_height, h);
      if (!(h < delta)) throw Error(ErrorCode::blow_up, where + ": pushed stable height " + fmt(h) + " >= delta");
    }
    const double base = row_length(cs, pushed, 0, a, b);
    if (base > delta * (1.0 + kRelTol)) {
      throw Error(ErrorCode::blow_up, where + ": pushed unstable base " + fmt(base) + " > delta");
    }
    for (std::size_t j = 0; j <= top; ++j) {
      for (std::size_t i = a; i <= b; ++i) {
        TorusLeafPoint z;
        try {
          z = sys.bracket(pushed.node(i, 0), pushed.node(a, j), cs.xi());
        } catch (const Error& e) {
          throw Error(ErrorCode::blow_up, where + ": sub-rectangle leaves the product box: " + e.what());
        }
        const double scale = std::max(1.0, pushed.node(i, j).eigen_coords().lpNorm<Eigen::Infinity>());
        r.residual = std::max(r.residual, eigen_gap(z, pushed.node(i, j)) / scale);
      }
    }
    const double top_len = row_length(cs, pushed, top, a, b);
    if (top_len > (1.0 + eps) * base * (1.0 + kRelTol)) {
      throw Error(ErrorCode::blow_up, where + ": top piece " + fmt(top_len) + " > (1+eps) * base " + fmt(base));
    }
    r.certified += top_len * std::pow(cs.lambda(), -k);
  }
  return r;
}

}  // namespace

std::pair<SURectangle, HolonomyReport> extend_holonomy(const TorusConformalStructure& cs, const LeafCurve& gamma_u_in,
                                                       const LeafCurve& gamma_s_in, const HolonomyConfig& config) {
  const TorusSystem& sys = cs.system();
  const double lambda = cs.lambda();
  const double delta = config.delta;
  const double eps = config.eps;
  if (!(delta > 0.0) || !(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "delta and eps must be positive");
  if (!((1.0 + eps) / lambda < 1.0)) throw Error(ErrorCode::invalid_argument, "need (1+eps)/lambda < 1");
  if (config.unstable_grid < 1 || config.stable_grid < 1) throw Error(ErrorCode::invalid_argument, "grid sizes");
  if (gamma_u_in.leaf() != Leaf::unstable || gamma_s_in.leaf() != Leaf::stable) {
    throw Error(ErrorCode::invalid_argument, "extend_holonomy needs an unstable and a stable curve");
  }

  HolonomyReport rep;
  rep.eps = eps;
  rep.delta = delta;
  rep.base_length = rho_length_sum(cs.gauge(), gamma_u_in);

  int k0 = 0;
  while (rep.base_length * std::pow(lambda, -k0) > delta * (1.0 + 1e-12)) {
    if (++k0 > sys.horizon()) throw Error(ErrorCode::horizon_exceeded, "gamma_u cannot be shrunk below delta");
  }
  rep.pre_iterations = k0;
  const LeafCurve gu = k0 ? gamma_u_in.iterated(-k0) : gamma_u_in;
  const LeafCurve gs = k0 ? gamma_s_in.iterated(-k0) : gamma_s_in;
  const double ell = rho_length_sum(cs.gauge(), gu);

  std::vector<double> alphas{gs.begin()};
  if (!gs.degenerate()) {
    while (alphas.back() < gs.end()) {
      const double threshold = alphas.size() == 1 ? delta : delta / lambda;
      double next = gs.end();
      try {
        next = stable_threshold_param(cs, gs, alphas.back(), threshold);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::remainder_short) throw;
      }
      if (!(next > alphas.back())) throw Error(ErrorCode::internal, "stable threshold made no progress");
      alphas.push_back(next);
    }
  }
  const int stages = std::max<int>(1, static_cast<int>(alphas.size()) - 1);

  std::vector<int> depth(static_cast<std::size_t>(stages) + 1, 0);
  std::vector<std::vector<double>> betas(static_cast<std::size_t>(stages) + 1);
  std::vector<double> tvalues = gu.degenerate() ? std::vector<double>{gu.begin()} : curve_grid(gu, config.unstable_grid);
  if (ell > 0.0) {
    for (int i = 2; i <= stages; ++i) {
      const double height = (1.0 + eps) * delta * (1.0 + (i - 1) / lambda);
      int k = 1;
      while (!(std::pow(lambda, -k) * height < delta)) ++k;
      if (k > sys.horizon()) throw Error(ErrorCode::horizon_exceeded, "renormalization depth exceeds the horizon");
      const double piece = std::pow(lambda, -k) * delta;
      const int j = std::max(1, static_cast<int>(std::ceil(ell / piece - 1e-9)));
      depth[static_cast<std::size_t>(i)] = k;
      betas[static_cast<std::size_t>(i)] = length_params(cs.gauge(), gu, piece, j);
      tvalues.insert(tvalues.end(), betas[static_cast<std::size_t>(i)].begin(), betas[static_cast<std::size_t>(i)].end());
    }
    tvalues = merge_grid(std::move(tvalues));
  }
  const std::vector<double>& tgrid = tvalues;

  auto stage_sgrid = [&](int i) {
    if (gs.degenerate()) return std::vector<double>{gs.begin()};
    return interval_grid(gs, alphas[static_cast<std::size_t>(i - 1)], alphas[static_cast<std::size_t>(i)],
                         config.stable_grid);
  };
  auto stage_curve = [&](int i) {
    if (gs.degenerate()) return gs;
    return gs.restricted(alphas[static_cast<std::size_t>(i - 1)], alphas[static_cast<std::size_t>(i)]);
  };

  SURectangle G = local_rectangle(cs, gu, stage_curve(1), tgrid, stage_sgrid(1), delta, eps, 1);
  {
    StageRecord rec;
    rec.index = 1;
    rec.alpha_begin = alphas.front();
    rec.alpha_end = gs.degenerate() ? gs.begin() : alphas[1];
    rec.threshold = delta;
    rec.j = 1;
    rec.row_ratio = ell > 0.0 ? row_length(cs, G, G.ns() - 1) / ell : 1.0;
    rec.certified_ratio = rec.row_ratio;
    rep.records.push_back(rec);
  }

  for (int i = 2; i <= stages; ++i) {
    std::vector<TorusLeafPoint> pulled;
    pulled.reserve(G.nu());
    for (std::size_t c = 0; c < G.nu(); ++c) pulled.push_back(sys.iterate(top_row_node(G, c), -1));
    const LeafCurve ut = pulled.size() > 1
                             ? LeafCurve::from_nodes(sys, Leaf::unstable, pulled, tgrid)
                             : LeafCurve::segment(sys, Leaf::unstable, pulled.front(),
                                                  Vec::Zero(static_cast<Eigen::Index>(sys.dim())));
    const LeafCurve st = stage_curve(i).iterated(-1);
    const SURectangle tilde = local_rectangle(cs, ut, st, pulled.size() > 1 ? tgrid : std::vector<double>{ut.begin()},
                                              stage_sgrid(i), delta, eps, i);
    G = glue_rectangles(G, iterate_rectangle(sys, tilde, 1));

    StageRecord rec;
    rec.index = i;
    rec.alpha_begin = alphas[static_cast<std::size_t>(i - 1)];
    rec.alpha_end = alphas[static_cast<std::size_t>(i)];
    rec.threshold = delta / lambda;
    rec.row_ratio = ell > 0.0 ? row_length(cs, G, G.ns() - 1) / ell : 1.0;
    rec.certified_ratio = rec.row_ratio;
    if (ell > 0.0) {
      const auto& bs = betas[static_cast<std::size_t>(i)];
      std::vector<std::size_t> cuts;
      for (double b : bs) cuts.push_back(nearest_index(tgrid, b));
      rec.k = depth[static_cast<std::size_t>(i)];
      rec.j = static_cast<int>(cuts.size()) - 1;
      const Renormalization r = renormalize(cs, G, rec.k, cuts, delta, eps);
      rec.stable_height = r.stable_height;
      rec.certified_ratio = r.certified / ell;
      rec.residual = r.residual;
      if (rec.certified_ratio > (1.0 + eps) * (1.0 + kRelTol)) {
        throw Error(ErrorCode::blow_up, "stage " + std::to_string(i) + ": certified unstable length ratio " +
                                            fmt(rec.certified_ratio) + " exceeds 1+eps");
      }
    }
    rep.records.push_back(rec);
  }

  if (k0) G = iterate_rectangle(sys, G, k0);

  const HolonomyReport check = verify_rectangle(cs, G, eps);
  rep.stages = stages;
  rep.row_lengths = check.row_lengths;
  rep.row_ratios.clear();
  for (double l : rep.row_lengths) rep.row_ratios.push_back(rep.base_length > 0.0 ? l / rep.base_length : 1.0);
  rep.max_ratio = rep.row_ratios.empty() ? 1.0 : *std::max_element(rep.row_ratios.begin(), rep.row_ratios.end());
  rep.min_ratio = rep.row_ratios.empty() ? 1.0 : *std::min_element(rep.row_ratios.begin(), rep.row_ratios.end());
  rep.final_ratio = rep.row_ratios.empty() ? 1.0 : rep.row_ratios.back();
  rep.max_residual = check.max_residual;
  for (const auto& r : rep.records) rep.max_residual = std::max(rep.max_residual, r.residual);
  rep.max_column_excess = check.max_column_excess;
  if (rep.max_ratio > (1.0 + eps) * (1.0 + kRelTol)) {
    throw Error(ErrorCode::blow_up, "unstable row ratio " + fmt(rep.max_ratio) + " exceeds 1+eps");
  }
  rep.pass = check.pass && rep.max_residual <= kResidualTol;
  rep.failure = check.failure;
  rep.witness = check.witness;
  return {std::move(G), std::move(rep)};
}

HolonomyReport verify_rectangle(const TorusConformalStructure& cs, const SURectangle& g, double eps) {
  const TorusSystem& sys = cs.system();
  HolonomyReport rep;
  rep.eps = eps;
  rep.stages = g.provenance.empty() ? (g.empty() ? 0 : 1) : *std::max_element(g.provenance.begin(), g.provenance.end());
  if (g.empty()) return rep;
  auto fail = [&](const std::string& what, const std::string& witness) {
    if (rep.pass) {
      rep.pass = false;
      rep.failure = what;
      rep.witness = witness;
    }
  };
  auto node_name = [](std::size_t i, std::size_t j) { return "node (" + std::to_string(i) + "," + std::to_string(j) + ")"; };

  std::size_t worst_i = 0;
  std::size_t worst_j = 0;
  for (std::size_t j = 0; j < g.ns(); ++j) {
    for (std::size_t i = 0; i < g.nu(); ++i) {
      const TorusLeafPoint z = sys.leaf_intersection(g.node(i, 0), g.node(0, j));
      const double r = eigen_gap(z, g.node(i, j));
      if (r > rep.max_residual) {
        rep.max_residual = r;
        worst_i = i;
        worst_j = j;
      }
    }
  }
  if (rep.max_residual > kResidualTol) {
    fail("corner consistency residual " + fmt(rep.max_residual), node_name(worst_i, worst_j));
  }

  for (std::size_t j = 0; j < g.ns(); ++j) {
    for (std::size_t i = 0; i + 1 < g.nu(); ++i) {
      const Vec d = sys.leaf_displacement(g.node(i, j), g.node(i + 1, j));
      if (sys.off_bundle(d, Leaf::unstable) > 1e-10) fail("row leaves its unstable leaf", node_name(i, j));
    }
  }
  for (std::size_t i = 0; i < g.nu(); ++i) {
    for (std::size_t j = 0; j + 1 < g.ns(); ++j) {
      const Vec d = sys.leaf_displacement(g.node(i, j), g.node(i, j + 1));
      if (sys.off_bundle(d, Leaf::stable) > 1e-10) fail("column leaves its stable leaf", node_name(i, j));
    }
  }

  rep.base_length = row_length(cs, g, 0);
  for (std::size_t j = 0; j < g.ns(); ++j) {
    const double l = row_length(cs, g, j);
    rep.row_lengths.push_back(l);
    const double ratio = rep.base_length > 0.0 ? l / rep.base_length : 1.0;
    rep.row_ratios.push_back(ratio);
    if (ratio > (1.0 + eps) * (1.0 + kRelTol) || ratio < (1.0 - eps) * (1.0 - kRelTol)) {
      fail("row length ratio " + fmt(ratio) + " outside [1-eps, 1+eps]", "row " + std::to_string(j));
    }
  }
  rep.max_ratio = *std::max_element(rep.row_ratios.begin(), rep.row_ratios.end());
  rep.min_ratio = *std::min_element(rep.row_ratios.begin(), rep.row_ratios.end());
  rep.final_ratio = rep.row_ratios.back();

  for (std::size_t j = 1; j < g.ns(); ++j) {
    double ref = 0.0;
    try {
      ref = cs.leaf_distance(g.node(0, 0), g.node(0, j), Leaf::stable).value;
    } catch (const Error& e) {
      fail(e.what(), node_name(0, j));
      continue;
    }
    for (std::size_t i = 0; i < g.nu(); ++i) {
      try {
        const double dc = cs.leaf_distance(g.node(i, 0), g.node(i, j), Leaf::stable).value;
        const double bound = (1.0 + eps) * ref;
        if (bound > 0.0) rep.max_column_excess = std::max(rep.max_column_excess, dc / bound);
        if (dc > bound * (1.0 + kRelTol) + 1e-15) fail("column d^s " + fmt(dc) + " exceeds (1+eps) bound", node_name(i, j));
      } catch (const Error& e) {
        fail(e.what(), node_name(i, j));
      }
    }
  }
  return rep;
}

double pseudo_isometry_bound(double lambda, long m) {
  const double den = std::pow(lambda, static_cast<double>(m - 1)) - 2.0;
  return den > 0.0 ? 2.0 / den : std::numeric_limits<double>::infinity();
}

long scale_index(double lambda, double xi, double value) {
  if (!(value > 0.0)) throw Error(ErrorCode::invalid_argument, "scale index needs a positive value");
  long m = static_cast<long>(std::floor(std::log(xi / value) / std::log(lambda)));
  while (xi * std::pow(lambda, static_cast<double>(-m - 1)) >= value) ++m;
  while (value > xi * std::pow(lambda, static_cast<double>(-m))) --m;
  return m;
}

namespace {

long first_useful_scale(double lambda) {
  long m = 1;
  while (!(pseudo_isometry_bound(lambda, m) < 1.0)) ++m;
  return m;
}

struct TorusPair {
  double distortion;
  double max_distance;
  std::string witness;
};

/// One holonomy pair on plaques of C_xi(center) at the given pair gauge.
/// plaque = stable: p, q on [{x}, W^s(z)] moved by the unstable holonomy;
/// plaque = unstable: p, q on [W^u(z), {y}] moved by the stable holonomy.
TorusPair torus_pair(const TorusConformalStructure& cs, const TorusLeafPoint& z, CounterRng& rng, Leaf plaque,
                     double pair_gauge) {
  const TorusSystem& sys = cs.system();
  const double r = cs.xi() / 16.0;
  const Leaf other = opposite(plaque);
  const TorusLeafPoint a1 = sys.translate(z, random_bundle_vector(sys, rng, other, r * rng.uniform()));
  const TorusLeafPoint a2 = sys.translate(z, random_bundle_vector(sys, rng, other, r * rng.uniform()));
  const TorusLeafPoint b1 = sys.translate(z, random_bundle_vector(sys, rng, plaque, r * rng.uniform()));
  const TorusLeafPoint b2 = sys.translate(b1, random_bundle_vector(sys, rng, plaque, pair_gauge));
  auto br = [&](const TorusLeafPoint& u, const TorusLeafPoint& s) {
    return plaque == Leaf::stable ? sys.bracket(u, s, cs.xi()) : sys.bracket(s, u, cs.xi());
  };
  // Stable plaque: [a, b] over b in W^s(z); unstable plaque: [b, a] over b in W^u(z).
  const TorusLeafPoint p = br(a1, b1);
  const TorusLeafPoint q = br(a1, b2);
  const TorusLeafPoint pp = br(a2, b1);
  const TorusLeafPoint pq = br(a2, b2);
  const double d0 = cs.base_distance(p, q);
  const double d1 = cs.base_distance(pp, pq);
  return TorusPair{std::abs(1.0 - d1 / d0), std::max(d0, d1),
                   std::string(leaf_name(plaque)) + " plaque p=" + fmt(p.lift()[0]) + ".. d=" + fmt(d0)};
}

}  // namespace

AuditReport pseudo_isometry_audit(const TorusConformalStructure& cs, const TorusLeafPoint& center, long sample_pairs,
                                  std::uint64_t seed) {
  const double lambda = cs.lambda();
  const long m0 = first_useful_scale(lambda);
  constexpr long kScales = 10;
  auto fn = [&](long i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const Leaf plaque = i % 2 == 0 ? Leaf::stable : Leaf::unstable;
    const long target = m0 + static_cast<long>(rng.below(kScales));
    const double g = cs.xi() * std::pow(lambda, -static_cast<double>(target) - rng.uniform(0.05, 0.95));
    const TorusPair pr = torus_pair(cs, center, rng, plaque, g);
    const long m = scale_index(lambda, cs.xi(), pr.max_distance);
    const double bound = pseudo_isometry_bound(lambda, m);
    return detail::Sample{pr.distortion, m >= m0 && pr.distortion <= bound,
                          pr.witness + " m=" + std::to_string(m) + " bound=" + fmt(bound)};
  };
  AuditReport r;
  r.kind = "pseudo_isometry";
  r.model = "torus";
  r.threshold = pseudo_isometry_bound(lambda, m0 + kScales - 1);
  r = detail::reduce(std::move(r), detail::run_parallel(sample_pairs, fn));
  r.details = {{"m0", static_cast<double>(m0)}, {"bound_m0", pseudo_isometry_bound(lambda, m0)}};
  return r;
}

AuditReport pseudo_isometry_audit(const ShiftConformalStructure& cs, const ShiftPoint& center, long sample_pairs,
                                  std::uint64_t seed) {
  const ShiftSpace& space = cs.space();
  const double lambda = space.lambda().get_d();
  const long m0 = first_useful_scale(lambda);
  constexpr long kScales = 16;
  auto fn = [&](long i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const Leaf plaque = i % 2 == 0 ? Leaf::stable : Leaf::unstable;
    const long depth = m0 + 1 + static_cast<long>(rng.below(kScales));
    // Points of W^u_xi(z) agree with z on k <= 0, points of W^s_xi(z) on k >= 0.
    auto unstable_near = [&](const ShiftPoint& p, long cut) { return random_future_variant(space, rng, p, cut); };
    auto stable_near = [&](const ShiftPoint& p, long cut) { return random_past_variant(space, rng, p, cut); };
    ShiftPoint p = center, q = center, pp = center, pq = center;
    if (plaque == Leaf::stable) {
      // p, q = [x, w1], [x, w2] differ in the past at -depth; pi^u swaps x for y.
      const ShiftPoint x = unstable_near(center, rng.between(0, 6));
      const ShiftPoint y = unstable_near(center, rng.between(0, 6));
      const ShiftPoint w1 = stable_near(center, rng.between(-6, 0));
      const ShiftPoint w2 = stable_near(w1, 1 - depth);
      p = bracket_shift(space, x, w1);
      q = bracket_shift(space, x, w2);
      pp = bracket_shift(space, y, w1);
      pq = bracket_shift(space, y, w2);
    } else {
      // p, q = [x1, w], [x2, w] differ in the future at +depth; pi^s is the past splice w -> w'.
      const ShiftPoint x1 = unstable_near(center, rng.between(0, 6));
      const ShiftPoint x2 = unstable_near(x1, depth - 1);
      const ShiftPoint w = stable_near(center, rng.between(-6, 0));
      const ShiftPoint w2 = stable_near(center, rng.between(-6, 0));
      p = bracket_shift(space, x1, w);
      q = bracket_shift(space, x2, w);
      pp = bracket_shift(space, x1, w2);
      pq = bracket_shift(space, x2, w2);
    }
    const Rational d0 = cs.base_distance(p, q);
    const Rational d1 = cs.base_distance(pp, pq);
    if (d0 == 0 && d1 == 0) return detail::Sample{0.0, true, "coincident pair"};
    if (d0 == 0) return detail::Sample{std::numeric_limits<double>::infinity(), false, "holonomy separated a coincident pair"};
    const Rational distortion = abs(1 - d1 / d0);
    const Rational top = std::max(d0, d1);
    const double md = top.get_d();
    const long m = scale_index(lambda, cs.xi().get_d(), md);
    const double bound = pseudo_isometry_bound(lambda, m);
    return detail::Sample{distortion.get_d(), distortion == 0 && m >= m0 && distortion.get_d() <= bound,
                          std::string(leaf_name(plaque)) + " plaque p=" + p.to_string() + " q=" + q.to_string() +
                              " m=" + std::to_string(m)};
  };
  AuditReport r;
  r.kind = "pseudo_isometry";
  r.model = "shift";
  r.threshold = 0.0;
  r = detail::reduce(std::move(r), detail::run_parallel(sample_pairs, fn));
  r.details = {{"m0", static_cast<double>(m0)}, {"bound_m0", pseudo_isometry_bound(lambda, m0)}};
  return r;
}

double calibrate_delta(const TorusConformalStructure& cs, double eps, long samples, std::uint64_t seed) {
  const TorusLeafPoint center = cs.system().point(Vec::Zero(static_cast<Eigen::Index>(cs.system().dim())));
  double candidate = cs.xi() / 4.0;
  for (int r = 0; r < 40; ++r, candidate *= 0.5) {
    auto fn = [&](long i) {
      CounterRng rng(seed, static_cast<std::uint64_t>(i));
      const Leaf plaque = i % 2 == 0 ? Leaf::stable : Leaf::unstable;
      const double g = candidate * std::pow(10.0, -3.0 * rng.uniform());
      const TorusPair pr = torus_pair(cs, center, rng, plaque, g);
      return detail::Sample{pr.distortion, pr.distortion < eps, pr.witness};
    };
    const auto rs = detail::run_parallel(samples, fn);
    if (std::all_of(rs.begin(), rs.end(), [](const detail::Sample& s) { return s.ok; })) return candidate;
  }
  throw Error(ErrorCode::internal, "no delta passes the pseudo-isometry calibration");
}

}  // namespace hlab
