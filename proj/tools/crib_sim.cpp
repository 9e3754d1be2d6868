// Copyright (c) 2026 The crib-memory Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0.txt
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver: one subcommand per experiment, CSV to --out (or
// output.path, or <experiment>.csv), summary on stdout.
//
// Exit codes: 0 success, 1 validation or numerical failure, 2 bad config.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crib/sweep.hpp"

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  std::string panel = "top";
};

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--config", opt.config_path, "key = value config file");
  sub->add_option("--set", opt.overrides, "override, key=value (repeatable)")
      ->take_all();
  sub->add_option("--out", opt.out_path, "CSV output path");
}

int run(crib::Experiment e, const Options& opt) {
  crib::Config cfg;
  try {
    if (!opt.config_path.empty()) cfg = crib::Config::load(opt.config_path);
    for (const auto& s : opt.overrides) cfg.assign(s);
  } catch (const crib::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  }

  crib::SweepResult result;
  try {
    result = crib::run_experiment(e, cfg);
  } catch (const crib::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const crib::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }

  std::string path = opt.out_path;
  if (path.empty()) path = cfg.get_string("output.path", crib::to_string(e) + ".csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write '" << path << "'\n";
    return 2;
  }
  crib::write_csv(out, result);

  std::cout << crib::to_string(e) << ": " << result.rows.size() << " rows -> "
            << path << "\n";
  for (const auto& line : result.summary) std::cout << "  " << line << "\n";
  return result.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controlled reversible inhomogeneous broadening memory simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(crib::version));

  Options opt;
  struct Entry {
    const char* name;
    const char* help;
  };
  const Entry entries[] = {
      {"fig1", "efficiency vs optical depth, wide box broadening"},
      {"fig2", "efficiency vs broadening width, Lorentzian shapes"},
      {"fig4", "identical vs different pulse / broadening shapes"},
      {"decay", "storage-time decay from the initial linewidth"},
      {"optimize", "optimal broadening width"},
      {"validate", "time-domain oracle vs analytic solution"},
      {"custom", "single configured point"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& entry : entries) {
    auto* sub = app.add_subcommand(entry.name, entry.help);
    add_common(sub, opt);
    if (std::string(entry.name) == "fig2")
      sub->add_option("--panel", opt.panel, "top (nu = 2) or bottom (nu = 0.05)")
          ->check(CLI::IsMember({"top", "bottom"}));
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (auto* sub : subs) {
    if (!sub->parsed()) continue;
    const std::string name = sub->get_name();
    if (name == "fig2")
      return run(opt.panel == "top" ? crib::Experiment::fig2_top
                                    : crib::Experiment::fig2_bottom,
                 opt);
    return run(crib::experiment_from_string(name), opt);
  }
  return 2;
}
