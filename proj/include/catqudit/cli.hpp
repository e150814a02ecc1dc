// Copyright 2026 The catqudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CATQUDIT_CLI_HPP
#define CATQUDIT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "catqudit/protocol.hpp"

namespace catqudit {

inline constexpr const char* kToolVersion = "0.1.0";
/// Default output directory when --out is not given.
inline constexpr const char* kOutputDirEnv = "CATQUDIT_OUTPUT_DIR";

enum ExitCode : int { kExitOk = 0, kExitScience = 1, kExitUsage = 2 };

/// Entry point of the `catqudit` executable.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  std::string config_path;
  std::string preset;
  std::string output_dir;
  /// The integrators draw no random numbers; reruns are bit-identical.
  bool deterministic = true;
  std::string tool_version = kToolVersion;
  /// Command line that replays the run from the output directory.
  std::string replay;
};

std::string to_text(const RunManifest& manifest);

/// "a,b,c", or "lo..hi" / "lo..hi:n" for n evenly spaced points
/// (`default_count` when n is omitted). Throws std::invalid_argument.
std::vector<double> parse_points(const std::string& text, int default_count = 9);

// Result table shared by simulate (one row) and sweep (one row per point).
// Columns: axis_value, F, model_level, T_us, kappa_inv_us, x, dtau_frac,
// g_cr_frac, runtime_s, then axis, tau_us, integrated_dim, steps, min_trace,
// max_trace_error, max_hermiticity_defect, min_eigenvalue,
// max_excited_population, flagged, ok, error.
std::string result_csv_header();
std::string result_csv_row(const std::string& axis, double axis_value,
                           const FidelityResult& result);

struct ResultRow {
  double axis_value = 0.0;
  double F = 0.0;
  std::string model_level;
  double T_us = 0.0;
  double kappa_inv_us = 0.0;
  double x = 0.0;
  double dtau_frac = 0.0;
  double g_cr_frac = 0.0;
  std::string axis;
  bool ok = true;
};

/// Reads a table written with result_csv_header/result_csv_row.
std::vector<ResultRow> parse_result_csv(const std::string& text);

/// SVG line chart of F against axis_value, one polyline per combination of
/// the other knobs.
std::string render_svg(const std::vector<ResultRow>& rows);

}  // namespace catqudit

#endif  // CATQUDIT_CLI_HPP
