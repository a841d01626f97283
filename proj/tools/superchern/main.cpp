// Copyright 2026 The superchern Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// superchern run <config.json> [--out DIR] [--threads N] [--seed S]
// superchern list-models
// superchern schema

#include "experiments.hpp"
#include "schema.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  namespace sc = superchern::cli;

  CLI::App app{"Verification experiments for superconnections on flat tori and circles"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  std::string config_path;
  sc::RunOptions opts;
  std::string out;
  int threads = 0;
  std::uint64_t seed = 0;
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  auto* out_opt = run->add_option("--out", out, "Output directory (overrides the config)");
  run->add_option("--threads", threads, "Worker threads (default: SUPERCHERN_THREADS or hardware)")
      ->check(CLI::NonNegativeNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Seed recorded in the report (overrides the config)");

  auto* list = app.add_subcommand("list-models", "List the shipped models");
  auto* schema = app.add_subcommand("schema", "Print the JSON Schema of experiment configs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sc::kExitSchema;
  }

  try {
    if (*schema) {
      std::cout << sc::config_schema().dump(2) << '\n';
      return sc::kExitPass;
    }
    if (*list) {
      for (const auto& m : sc::list_models()) {
        std::cout << m.name << "\n  " << m.description << "\n  exercises: " << m.identity << '\n';
      }
      return sc::kExitPass;
    }
    if (*out_opt) opts.out = out;
    if (*seed_opt) opts.seed = seed;
    opts.threads = threads;
    const sc::RunOutcome o = sc::run(superchern::read_json_file(config_path), opts);
    const auto& summary = o.report.at("summary");
    std::cout << o.report.at("experiment").get<std::string>() << ": "
              << (summary.at("pass").get<bool>() ? "PASS" : "FAIL")
              << " (max residual " << summary.at("max_residual").get<double>() << ", "
              << summary.at("runtime_seconds").get<double>() << " s) -> " << (o.out_dir / "report.json").string() << '\n';
    return o.exit_code;
  } catch (const std::exception& e) {
    const int code = sc::exit_code_for(e);
    std::cerr << "superchern: " << sc::error_kind(code) << ": " << e.what() << '\n';
    return code;
  }
}
