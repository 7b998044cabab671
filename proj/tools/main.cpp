// Copyright 2026 The lindred Authors
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

// lindred <experiment> --config <path> [--out <path>] [--dt <real>] [--seed <int>]

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lindred/config.hpp"
#include "lindred/runner.hpp"

int main(int argc, char** argv) {
  using namespace lindred;

  CLI::App app{"Reduced models of Lambda-type open quantum systems"};
  app.set_version_flag("--version", std::string(kToolVersion));

  const std::vector<std::string> experiments{
      "simulate-full", "simulate-slow", "compare",          "reduce",
      "sweep-eps",     "rwa-check",     "dark-state-check", "verify-appendix"};
  std::string experiment;
  std::string config_path;
  std::optional<std::string> out;
  std::optional<double> dt;
  std::optional<long long> seed;  // accepted, unused by the deterministic experiments

  app.add_option("experiment", experiment, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(experiments));
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out, "Output path (overrides output_path)");
  app.add_option("--dt", dt, "Step size (overrides dt)")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Reserved for randomized property tests");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  RunConfig config;
  try {
    config = parse_config(read_text_file(config_path));
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << config_path << ": " << e.what() << '\n';
    return kExitConfig;
  }

  config.experiment = parse_experiment(experiment);
  if (out) config.output_path = *out;
  if (dt) config.dt = *dt;
  return run(config, std::cout, std::cerr);
}
