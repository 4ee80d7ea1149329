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

#include "holonomy_lab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "holonomy_lab/config.hpp"
#include "holonomy_lab/report.hpp"
#include "holonomy_lab/svg.hpp"

namespace hlab {

namespace {

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

/// Collects output files and summary lines for one run.
class Run {
 public:
  Run(const ExperimentConfig& config, std::string subcommand) : config_(config), subcommand_(std::move(subcommand)) {}

  void write(const std::string& name, const std::string& content) {
    files_.push_back(write_file(config_.out, name, content));
  }
  void line(const std::string& text) { summary_ += text + "\n"; }
  void certify(bool ok) { pass_ = pass_ && ok; }
  bool pass() const { return pass_; }

  void audit(const AuditReport& r, const std::string& file, bool counted = true) {
    write(file, dump_json(to_json(r)));
    line(r.kind + " (" + r.model + "): " + (r.pass ? "pass" : "FAIL") +
         " worst=" + (r.worst_value ? fmt(*r.worst_value) : "none") + " threshold=" + fmt(r.threshold) +
         (counted ? "" : " [probe, not certified]"));
    if (counted) certify(r.pass);
  }

  std::string finish(int exit_code, ErrorCode code, const std::string& error, const std::string& started,
                     bool persist = true) {
    std::string summary = "holonomy-lab " + std::string(tool_version()) + " " + subcommand_ + "\n" + summary_;
    if (!error.empty()) summary += "error: " + error + "\n";
    summary += std::string("result: ") + (exit_code == 0 ? "pass" : "FAIL") + " (exit " + std::to_string(exit_code) + ")\n";
    if (persist) {
      try {
        write("summary.txt", summary);
      } catch (const Error&) {
      }
    }
    Json m;
    m["tool"] = "holonomy-lab";
    m["version"] = tool_version();
    m["subcommand"] = subcommand_;
    Json ts;
    ts["started"] = started;
    ts["finished"] = utc_now();
    m["timestamps"] = ts;
    Json cfg = Json::object();
    for (const auto& [k, v] : config_.snapshot()) cfg[k] = v;
    m["config"] = cfg;
    m["exit_code"] = exit_code;
    m["pass"] = exit_code == 0;
    if (error.empty()) {
      m["error"] = nullptr;
    } else {
      Json e;
      e["code"] = error_name(code);
      e["message"] = error;
      m["error"] = e;
    }
    Json files = Json::array();
    for (const auto& f : files_) {
      Json e;
      e["name"] = f.name;
      e["bytes"] = f.bytes;
      e["sha256"] = f.sha256;
      files.push_back(e);
    }
    m["files"] = files;
    const std::string text = dump_json(m);
    if (persist) {
      try {
        write_file(config_.out, "manifest.json", text);
      } catch (const Error&) {
      }
    }
    return text;
  }

 private:
  const ExperimentConfig& config_;
  std::string subcommand_;
  std::vector<WrittenFile> files_;
  std::string summary_;
  bool pass_ = true;
};

Vec line_vector(const TorusSystem& sys, Leaf leaf, int line, double gauge) {
  const auto& s = sys.splitting();
  const std::size_t col = s.first_column(leaf) + static_cast<std::size_t>(line);
  if (col >= s.end_column(leaf)) {
    throw Error(ErrorCode::config_invalid, std::string(leaf_name(leaf)) + "_line " + std::to_string(line) +
                                               " out of range: the bundle has " +
                                               std::to_string(s.end_column(leaf) - s.first_column(leaf)) + " lines");
  }
  Vec d = Vec::Zero(static_cast<Eigen::Index>(sys.dim()));
  d[static_cast<Eigen::Index>(col)] = std::pow(gauge, 1.0 / s.exponents[col]);
  return d;
}

Json system_json(const TorusSystem& sys) {
  Json j;
  j["matrix"] = sys.matrix().to_string();
  j["dimension"] = sys.dim();
  j["lambda"] = sys.lambda();
  j["exponents"] = sys.splitting().exponents;
  j["eigenvalues"] = sys.splitting().eigenvalues;
  return j;
}

void torus_audit(Run& run, const ExperimentConfig& c, const TorusSystem& sys) {
  const TorusConformalStructure cs(sys, c.xi, c.delta0);
  const TorusLeafPoint origin = sys.point(Vec::Zero(static_cast<Eigen::Index>(sys.dim())));
  run.audit(conformality_audit(cs, c.samples, c.seed), "audit.json");
  run.audit(leaf_conformality_audit(cs, c.samples, c.seed), "audit_leaf_conformality.json");
  run.audit(rho_conformality_audit(sys, c.samples, c.seed), "audit_rho_conformality.json");
  run.audit(holder_equivalence_audit(cs.gauge(), c.samples, c.seed), "audit_holder_equivalence.json");
  run.audit(pseudo_isometry_audit(cs, origin, c.samples, c.seed), "audit_pseudo_isometry.json");
  run.audit(metric_audit(cs, c.samples, c.seed), "audit_metric.json", false);
}

ShiftPoint demo_center(const ShiftSpace& space, std::uint64_t seed) {
  CounterRng rng(seed, 0xC0FFEEu);
  return random_shift_point(space, rng);
}

void shift_audit(Run& run, const ExperimentConfig& c, const ShiftSpace& space) {
  const ShiftConformalStructure cs(space, c.horizon);
  run.audit(conformality_audit(cs, c.samples, c.seed), "audit.json");
  run.audit(leaf_conformality_audit(cs, c.samples, c.seed), "audit_leaf_conformality.json");
  run.audit(pseudo_isometry_audit(cs, demo_center(space, c.seed), c.samples, c.seed), "audit_pseudo_isometry.json");
  run.audit(metric_audit(cs, c.samples, c.seed), "audit_metric.json", false);
}

void holonomy(Run& run, const ExperimentConfig& c, const TorusSystem& sys) {
  const TorusConformalStructure cs(sys, c.xi, c.delta0);
  HolonomyConfig hc;
  hc.eps = c.eps;
  hc.unstable_grid = c.unstable_grid;
  hc.stable_grid = c.stable_grid;
  const bool calibrated = !c.delta.has_value();
  hc.delta = calibrated ? calibrate_delta(cs, c.eps, c.samples, c.seed) : *c.delta;
  const double lu = c.unstable_length.value_or(hc.delta);
  const TorusLeafPoint origin = sys.point(Vec::Zero(static_cast<Eigen::Index>(sys.dim())));
  const LeafCurve gu =
      LeafCurve::segment(sys, Leaf::unstable, origin, line_vector(sys, Leaf::unstable, c.unstable_line, lu));
  const LeafCurve gs =
      LeafCurve::segment(sys, Leaf::stable, origin, line_vector(sys, Leaf::stable, c.stable_line, c.stable_length));
  run.line("delta = " + fmt(hc.delta) + (calibrated ? " (calibrated)" : " (configured)"));

  Json j;
  j["system"] = system_json(sys);
  j["delta"] = hc.delta;
  j["delta_source"] = calibrated ? "calibrated" : "configured";
  j["unstable_length"] = lu;
  j["stable_length"] = c.stable_length;
  try {
    auto [g, rep] = extend_holonomy(cs, gu, gs, hc);
    j["error"] = nullptr;
    j["report"] = to_json(rep);
    run.write("holonomy.json", dump_json(j));
    run.write("rows.csv", rows_csv(rep, g));
    if (sys.dim() == 2) {
      run.write("rectangle.svg", render_rectangle_svg(sys, g, tool_version()));
    } else {
      run.line("rectangle.svg skipped: geometric plots need a 2-D torus");
    }
    run.line("holonomy: " + std::string(rep.pass ? "pass" : "FAIL") + " stages=" + std::to_string(rep.stages) +
             " final_ratio=" + fmt(rep.final_ratio) + " max_ratio=" + fmt(rep.max_ratio) +
             " min_ratio=" + fmt(rep.min_ratio) + " max_residual=" + fmt(rep.max_residual));
    if (!rep.pass) run.line("failure: " + rep.failure + " at " + rep.witness);
    run.certify(rep.pass);
  } catch (const Error& e) {
    j["error"] = {{"code", error_name(e.code())}, {"message", e.what()}};
    run.write("holonomy.json", dump_json(j));
    throw;
  }
}

void transitivity(Run& run, const ExperimentConfig& c, const TorusSystem& sys) {
  Json j;
  j["system"] = system_json(sys);
  j["nmax"] = c.nmax;
  j["pairs"] = c.pairs;
  Json pairs = Json::array();
  bool pass = true;
  double worst = 0.0;
  std::optional<TransitivityWitness> first;
  for (long i = 0; i < c.pairs; ++i) {
    CounterRng rng(c.seed, static_cast<std::uint64_t>(i));
    const TorusLeafPoint x = random_torus_point(sys, rng);
    const TorusLeafPoint y = random_torus_point(sys, rng);
    TransitivityWitness w = transitivity_witness(sys, x, y, c.nmax);
    Json e;
    e["x"] = vec_json(x.lift());
    e["y"] = vec_json(y.lift());
    Json wj = to_json(w);
    for (auto it = wj.begin(); it != wj.end(); ++it) e[it.key()] = it.value();
    pairs.push_back(e);
    pass = pass && w.pass;
    worst = std::max(worst, w.max_error);
    if (!first) first = std::move(w);
  }
  j["pass"] = pass;
  j["tolerance"] = 1e-9;
  j["max_error"] = worst;
  j["witnesses"] = pairs;
  run.write("transitivity.json", dump_json(j));
  run.write("decay.csv", decay_csv(*first));
  run.write("decay.svg", render_decay_svg(*first, sys.lambda(), tool_version()));
  run.line("transitivity: " + std::string(pass ? "pass" : "FAIL") + " pairs=" + std::to_string(c.pairs) +
           " nmax=" + std::to_string(c.nmax) + " max_error=" + fmt(worst));
  run.certify(pass);
}

void shift_demo(Run& run, const ExperimentConfig& c, const ShiftSpace& space) {
  const ShiftConformalStructure cs(space, c.horizon);
  const ShiftPoint center = demo_center(space, c.seed);
  Json j;
  j["space"] = space.spec();
  j["lambda"] = rational_string(space.lambda());
  j["xi"] = rational_string(cs.xi());
  j["center"] = center.to_string();

  CounterRng rng(c.seed, 0xDE10u);
  Json examples = Json::array();
  for (long cut : {0L, -2L, -5L}) {
    const ShiftPoint y = random_past_variant(space, rng, center, cut);
    Json e;
    e["x"] = center.to_string();
    e["y"] = y.to_string();
    const auto fd = first_difference(center, y);
    e["first_difference"] = fd ? Json(*fd) : Json(nullptr);
    e["distance"] = rational_string(cs.base_distance(center, y));
    const ShiftLeafDistance ds = cs.leaf_distance(center, y, Leaf::stable);
    e["stable_leaf_distance"] = rational_string(ds.value);
    e["stable_n"] = ds.n;
    examples.push_back(e);
  }
  for (long cut : {0L, 3L}) {
    const ShiftPoint y = random_future_variant(space, rng, center, cut);
    Json e;
    e["x"] = center.to_string();
    e["y"] = y.to_string();
    const auto fd = first_difference(center, y);
    e["first_difference"] = fd ? Json(*fd) : Json(nullptr);
    e["distance"] = rational_string(cs.base_distance(center, y));
    const ShiftLeafDistance ds = cs.leaf_distance(center, y, Leaf::unstable);
    e["unstable_leaf_distance"] = rational_string(ds.value);
    e["unstable_n"] = ds.n;
    e["bracket"] = bracket_shift(space, y, center).to_string();
    examples.push_back(e);
  }
  j["examples"] = examples;

  Json audits = Json::array();
  auto add = [&](const AuditReport& r, bool counted) {
    run.line(r.kind + " (" + r.model + "): " + (r.pass ? "pass" : "FAIL") +
             " worst=" + (r.worst_value ? fmt(*r.worst_value) : "none") + (counted ? "" : " [probe, not certified]"));
    if (counted) run.certify(r.pass);
    audits.push_back(to_json(r));
  };
  add(conformality_audit(cs, c.samples, c.seed), true);
  add(leaf_conformality_audit(cs, c.samples, c.seed), true);
  add(pseudo_isometry_audit(cs, center, c.samples, c.seed), true);
  add(metric_audit(cs, c.samples, c.seed), false);
  j["audits"] = audits;
  j["pass"] = run.pass();
  run.write("shift.json", dump_json(j));
}

}  // namespace

const char* tool_version() { return HLAB_VERSION; }

ExperimentOutcome run_experiment(std::string_view subcommand, std::string_view config_text) {
  const std::string started = utc_now();
  ExperimentOutcome out;
  ExperimentConfig c;
  const std::string sub(subcommand);
  try {
    c = parse_config(config_text);
    if (sub != "audit" && sub != "holonomy" && sub != "transitivity" && sub != "shift-demo") {
      throw Error(ErrorCode::config_invalid, "unknown subcommand '" + sub + "'");
    }
    if (sub == "shift-demo" && !c.shift) {
      if (c.matrix) throw Error(ErrorCode::config_invalid, "shift-demo needs a shift, not a matrix");
      c.shift = "full2";
    }
    if ((sub == "holonomy" || sub == "transitivity") && c.shift) {
      throw Error(ErrorCode::config_invalid, sub + " needs a torus system (--matrix)");
    }
  } catch (const Error& e) {
    out.exit_code = 2;
    out.code = e.code();
    out.error = e.what();
    Run run(c, sub);
    out.manifest_json = run.finish(2, e.code(), e.what(), started, false);
    return out;
  }

  Run run(c, sub);
  try {
    if (c.shift) {
      const ShiftSpace space = ShiftSpace::parse(*c.shift, parse_rational(c.lambda));
      validate_config(c, space.lambda().get_d());
      if (sub == "audit") {
        shift_audit(run, c, space);
      } else {
        shift_demo(run, c, space);
      }
    } else {
      const TorusSystem sys(IntMatrix::parse(c.matrix_or_default()), c.horizon);
      validate_config(c, sys.lambda());
      if (sub == "audit") {
        torus_audit(run, c, sys);
      } else if (sub == "holonomy") {
        holonomy(run, c, sys);
      } else {
        transitivity(run, c, sys);
      }
    }
    out.exit_code = run.pass() ? 0 : 1;
  } catch (const Error& e) {
    out.code = e.code();
    out.error = e.what();
    out.exit_code = e.code() == ErrorCode::config_invalid ? 2 : 1;
  } catch (const std::exception& e) {
    out.code = ErrorCode::internal;
    out.error = std::string("Internal: ") + e.what();
    out.exit_code = 1;
  }
  out.manifest_json = run.finish(out.exit_code, out.code, out.error, started, out.exit_code != 2);
  return out;
}

}  // namespace hlab
