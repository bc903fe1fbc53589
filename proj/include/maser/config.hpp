// Copyright 2026 the maserlab authors
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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "maser/micro.hpp"

namespace maser {

/// One axis of a sweep grid: a full key ("pump.theta") plus raw values.
struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct SweepSpec {
  std::string mode;  // inner run mode of every grid point
  std::vector<SweepAxis> axes;
};

/// Fully validated run configuration.  parse_config reports every violation
/// it finds, not just the first; unknown keys are rejected.
struct SimulationConfig {
  // cavity
  int n_max = 1;
  double kappa = 0.0;
  double n_th = 0.0;
  // pump
  double theta = 0.0;
  double period = 1.0;
  std::vector<double> p;  // index k
  std::string multi_atom = "sequential";
  // filter
  CoarseGrainFilter::Kind filter_kind = CoarseGrainFilter::Kind::rectangular;
  double filter_width = 0.0;
  // run
  std::string mode;
  long n_periods = 1;
  int samples_per_period = 8;
  std::string method = "spectral";  // spectral | series
  long series_l_max = 1 << 16;
  double series_tail_tol = 1e-10;
  std::uint64_t seed = 1;
  int realizations = 1;
  int workers = 1;
  std::string initial = "vacuum";  // vacuum | fock:<n> | thermal:<x>
  std::string macro_seed = "filtered";  // filtered | plain
  // output
  std::string output_path = "out.csv";
  // gates: name -> threshold
  std::map<std::string, double> gates;
  // sweep
  std::optional<SweepSpec> sweep;

  /// Resolved values (defaults included) as section.key -> printable value.
  std::map<std::string, std::string> echo;

  /// Entries given explicitly in the document, verbatim.  Sweep expansion
  /// and CLI overrides replay these (so derived defaults re-derive per
  /// point) through the same validation path.
  std::map<std::string, std::string> raw;

  CoarseGrainFilter filter() const { return {filter_kind, filter_width}; }
  PumpSchedule schedule() const { return {period}; }
  FockSpace space() const { return {n_max}; }
};

/// Parses and validates a configuration document.  Throws ConfigError
/// carrying the complete list of violations (syntax errors carry line
/// numbers).
SimulationConfig parse_config(const std::string& text);

SimulationConfig parse_config_file(const std::string& path);

/// A grid point of a sweep: the point's full config plus its axis labels.
struct SweepPoint {
  SimulationConfig config;
  std::vector<std::pair<std::string, std::string>> labels;
};

/// Expands the Cartesian grid in declaration order (last axis fastest).
std::vector<SweepPoint> expand_sweep(const SimulationConfig& base);

/// Replays the explicit entries with overrides applied and re-validates.
/// Used for CLI flag overrides (--mode, --seed, --out, --workers).
SimulationConfig reparse_with_overrides(
    const SimulationConfig& base,
    const std::vector<std::pair<std::string, std::string>>& overrides);

/// Builds the initial state named by config.initial.
DensityOperator initial_state(const SimulationConfig& config);

}  // namespace maser
