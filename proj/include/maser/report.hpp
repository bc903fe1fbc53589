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

#include <optional>
#include <string>
#include <vector>

#include "maser/config.hpp"
#include "maser/observables.hpp"

namespace maser {

struct ObservableRow {
  double time = 0.0;
  std::string mode;  // micro_raw | micro_coarse | macro | stochastic_mean
  PhotonStatistics stats;
  std::optional<double> dev_mean_n;  // compare mode, macro rows only
};

struct GateResult {
  std::string name;
  double threshold = 0.0;
  double value = 0.0;
  bool pass = false;
  std::string note;
};

/// Scalar diagnostics of one run (or one sweep point).
struct BlockDiagnostics {
  std::map<std::string, double> values;
  std::map<std::string, std::string> notes;
};

struct ReportBlock {
  int index = 0;
  std::vector<std::pair<std::string, std::string>> labels;  // sweep axis values
  std::vector<ObservableRow> rows;
  BlockDiagnostics diagnostics;
};

struct RunReport {
  SimulationConfig config;
  std::string effective_mode;  // inner mode; decides the CSV schema
  std::vector<ReportBlock> blocks;
  std::vector<GateResult> gates;
  double wall_ms = 0.0;

  bool gates_passed() const;
};

/// %.12g rendering used for every floating value we emit.
std::string format_double(double v);

/// Deterministic CSV: header
/// time,mode,mean_n,variance,mandel_q,purity,top_level_population[,dev_mean_n];
/// the dev column is present exactly in compare mode; absent Mandel Q renders
/// as an empty field; sweep blocks are preceded by a "# point" comment line.
std::string csv_string(const RunReport& report);
void emit_csv(const RunReport& report, const std::string& path);

/// JSON sidecar mirroring the report (config echo, diagnostics, gates,
/// timing).
std::string json_string(const RunReport& report);
void emit_json(const RunReport& report, const std::string& path);

/// out.csv -> out.json (extension replaced, or .json appended).
std::string json_sidecar_path(const std::string& csv_path);

}  // namespace maser
