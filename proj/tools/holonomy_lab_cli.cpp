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

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "holonomy_lab/holonomy_lab.h"

namespace {

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

const Flag kFlags[] = {
    {"--matrix", "matrix", "integer matrix, rows separated by ';' (e.g. \"2,1;1,1\")"},
    {"--shift", "shift", "subshift: fullN or an adjacency matrix"},
    {"--lambda", "lambda", "shift expansion factor (exact: 2, 5/2, 2.5)"},
    {"--xi", "xi", "expansivity scale"},
    {"--delta0", "delta0", "bracket radius"},
    {"--eps", "eps", "pseudo-isometry tolerance"},
    {"--delta", "delta", "local rectangle size, or 'auto' to calibrate"},
    {"--grid", "grid", "nodes per stage, unstable x stable (e.g. 16x16)"},
    {"--horizon", "horizon", "largest |k| for f^k"},
    {"--samples", "samples", "audit sample count"},
    {"--seed", "seed", "random seed"},
    {"--out", "out", "output directory"},
    {"--stable-length", "stable_length", "d^s-size of the stable curve"},
    {"--unstable-length", "unstable_length", "l^u of the unstable curve (default delta)"},
    {"--stable-line", "stable_line", "stable eigenline index"},
    {"--unstable-line", "unstable_line", "unstable eigenline index"},
    {"--nmax", "nmax", "transitivity table depth"},
    {"--pairs", "pairs", "transitivity pair count"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holonomy-lab: conformal hyperbolic structures and global holonomy"};
  app.set_version_flag("--version", std::string(hl_version()));
  app.require_subcommand(1, 1);

  std::string config_file;
  bool print_manifest = false;
  std::map<std::string, std::string> values;
  for (const char* name : {"audit", "holonomy", "transitivity", "shift-demo"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_file, "key=value config file; flags override it")->check(CLI::ExistingFile);
    sub->add_flag("--print-manifest", print_manifest, "print the run manifest JSON");
    for (const Flag& f : kFlags) sub->add_option(f.name, values[f.key], f.help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();

  std::string text;
  if (!config_file.empty()) {
    std::ifstream f(config_file);
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str() + "\n";
  }
  for (const Flag& f : kFlags) {
    const std::string& v = values[f.key];
    if (!v.empty()) text += std::string(f.key) + "=" + v + "\n";
  }

  int exit_code = 1;
  char* manifest = nullptr;
  const hl_status st = hl_run_experiment(subcommand.c_str(), text.c_str(), &exit_code, &manifest);
  if (print_manifest && manifest) std::cout << manifest;
  hl_string_free(manifest);
  if (st != HL_OK) std::cerr << "error: " << hl_last_error() << "\n";
  std::cout << "holonomy-lab " << subcommand << ": " << (exit_code == 0 ? "pass" : "FAIL") << " (exit " << exit_code
            << ")\n";
  return exit_code;
}
