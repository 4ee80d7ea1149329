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

#include "holonomy_lab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <openssl/evp.h>

#include "holonomy_lab/error.hpp"

namespace hlab {

namespace {

std::string number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        emit(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += inner;
        emit(e, out, indent + 1);
      }
      out += flat ? "]" : "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += number(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& value) {
  std::string out;
  emit(value, out, 0);
  out += "\n";
  return out;
}

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(const AuditReport& r) {
  Json j;
  j["kind"] = r.kind;
  j["model"] = r.model;
  j["samples"] = r.samples;
  j["worst_value"] = r.worst_value ? Json(*r.worst_value) : Json(nullptr);
  j["worst_witness"] = r.worst_witness;
  j["threshold"] = r.threshold;
  j["pass"] = r.pass;
  Json d = Json::object();
  for (const auto& [k, v] : r.details) d[k] = v;
  j["details"] = d;
  return j;
}

Json to_json(const HolonomyReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["stages"] = r.stages;
  j["pre_iterations"] = r.pre_iterations;
  j["eps"] = r.eps;
  j["delta"] = r.delta;
  j["base_length"] = r.base_length;
  j["final_ratio"] = r.final_ratio;
  j["max_ratio"] = r.max_ratio;
  j["min_ratio"] = r.min_ratio;
  j["max_residual"] = r.max_residual;
  j["max_column_excess"] = r.max_column_excess;
  j["failure"] = r.failure;
  j["witness"] = r.witness;
  Json stages = Json::array();
  for (const auto& s : r.records) {
    Json e;
    e["index"] = s.index;
    e["alpha_begin"] = s.alpha_begin;
    e["alpha_end"] = s.alpha_end;
    e["threshold"] = s.threshold;
    e["k"] = s.k;
    e["j"] = s.j;
    e["stable_height"] = s.stable_height;
    e["row_ratio"] = s.row_ratio;
    e["certified_ratio"] = s.certified_ratio;
    e["residual"] = s.residual;
    stages.push_back(e);
  }
  j["stage_records"] = stages;
  return j;
}

Json to_json(const TransitivityWitness& w) {
  Json j;
  j["z"] = vec_json(w.z.lift());
  Json offset = Json::array();
  for (Eigen::Index i = 0; i < w.offset.size(); ++i) offset.push_back(static_cast<long>(std::lround(w.offset[i])));
  j["offset"] = offset;
  j["stable_part"] = vec_json(w.stable_part);
  j["unstable_part"] = vec_json(w.unstable_part);
  j["gauge"] = w.gauge;
  j["max_error"] = w.max_error;
  j["pass"] = w.pass;
  return j;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string csv_number(double value) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  return number(value);
}

std::string rows_csv(const HolonomyReport& report, const SURectangle& g) {
  std::string out = "row,stable_param,unstable_length,ratio\r\n";
  for (std::size_t j = 0; j < report.row_lengths.size() && j < g.ns(); ++j) {
    out += std::to_string(j) + "," + csv_number(g.stable_params[j]) + "," + csv_number(report.row_lengths[j]) + "," +
           csv_number(report.row_ratios[j]) + "\r\n";
  }
  return out;
}

std::string decay_csv(const TransitivityWitness& w) {
  std::string out = "n,forward_gauge,backward_gauge,expected\r\n";
  for (const auto& r : w.table) {
    out += std::to_string(r.n) + "," + csv_number(r.forward_gauge) + "," + csv_number(r.backward_gauge) + "," +
           csv_number(r.expected) + "\r\n";
  }
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::internal, "SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

WrittenFile write_file(const std::filesystem::path& dir, const std::string& name, const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io_failure, "cannot create " + dir.string() + ": " + ec.message());
  const auto path = dir / name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::io_failure, "cannot open " + path.string());
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.close();
  if (!f) throw Error(ErrorCode::io_failure, "cannot write " + path.string());
  return WrittenFile{name, content.size(), sha256_hex(content)};
}

}  // namespace hlab
