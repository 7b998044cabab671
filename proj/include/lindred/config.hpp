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

#pragma once

// Run configuration: a strict JSON schema.
//
//   {
//     "model": {"type": "lambda", "detuning": [...], "rabi_re": [...],
//               "rabi_im": [...], "gamma": [...]}
//            | {"type": "three_scale", "lambda_e": x, "lambda_g": [...],
//               "mu": [...], "u_re": [...], "u_im": [...],
//               "detuning": [...], "gamma": [...]},
//     "initial_state": "uniform_ground" | "excited" | "bright" | "dark"
//                      | {"re": [[...]], "im": [[...]]},
//     "t_end": x, "t_end_units": "absolute" | "slow_timescale",
//     "dt": x | "auto", "sample_every": n,
//     "experiment": "compare" | ...,
//     "sweep": {"scales": [...]},
//     "output_path": "..."
//   }
//
// Unknown keys are rejected. Defaults: initial_state "uniform_ground",
// t_end_units "absolute", dt "auto", sample_every 10, sweep scales
// {1, 2, 4, 8, 16}. rabi_im / u_im default to zeros.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lindred/linalg.hpp"
#include "lindred/models.hpp"

namespace lindred {

/// Malformed or schema-violating configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InitialStateKind { uniform_ground, excited, bright, dark, explicit_matrix };

enum class Experiment {
  simulate_full,
  simulate_slow,
  compare,
  reduce,
  sweep_eps,
  rwa_check,
  dark_state_check,
  verify_appendix,
};

enum class TimeUnits { absolute, slow_timescale };

std::string_view to_string(Experiment e);
std::string_view to_string(InitialStateKind k);
std::string_view to_string(TimeUnits u);
std::optional<Experiment> parse_experiment(std::string_view name);

struct RunConfig {
  std::variant<LambdaParams, ThreeScaleParams> model;
  InitialStateKind initial_state = InitialStateKind::uniform_ground;
  std::optional<ComplexMatrix> explicit_state;  // set iff explicit_matrix
  double t_end = 0.0;
  TimeUnits t_end_units = TimeUnits::absolute;
  std::optional<double> dt;  // nullopt = auto
  std::size_t sample_every = 10;
  std::optional<Experiment> experiment;
  std::vector<double> sweep_scales{1.0, 2.0, 4.0, 8.0, 16.0};
  std::string output_path;

  bool is_lambda() const noexcept {
    return std::holds_alternative<LambdaParams>(model);
  }
  /// The Lambda parameters, directly or through the rotating-wave map.
  LambdaParams lambda_params() const;
};

/// Parse and validate. Errors carry line/column for syntax problems, the key
/// path for schema problems and the index for invalid physical values.
RunConfig parse_config(std::string_view text);

/// Canonical JSON rendering; parse_config(render_config(c)) reproduces c.
std::string render_config(const RunConfig& c);

bool operator==(const LambdaParams& a, const LambdaParams& b);
bool operator==(const ThreeScaleParams& a, const ThreeScaleParams& b);
bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace lindred
