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

// Experiment dispatch and artifact writing for the command-line tool.
//
// Every experiment writes its main artifact to output_path (CSV, or JSON for
// `reduce`) and a plain-text summary to output_path + ".summary.txt". The
// summary starts with a [meta] block: tool version, config hash, dt, step
// count and renormalization count.

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lindred/config.hpp"

namespace lindred {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,  // ran fine, a built-in check did not hold
  kExitConfig = 2,
  kExitComputation = 3,
  kExitIo = 4,
};

/// File system failure while reading a config or writing an artifact.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunReport {
  std::vector<std::string> files;  // artifacts written, main one first
  std::string summary;             // text of the summary file
  bool checks_passed = true;
};

/// Shortest round-trip decimal form, locale independent.
std::string format_double(double v);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// Whole-file write through a temporary file and rename.
void write_file_atomic(const std::string& path, std::string_view content);

/// Run the configured experiment. Requires c.experiment and a non-empty
/// output_path. Throws ConfigError, InvalidArgument, ComputationError or
/// IoError.
RunReport execute(const RunConfig& c);

/// execute() with errors mapped to exit codes and reported on `err`; the
/// summary goes to `out`.
int run(const RunConfig& c, std::ostream& out, std::ostream& err);

/// Whole-file read; throws IoError.
std::string read_text_file(const std::string& path);

}  // namespace lindred
