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

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>

#include "maser/scenarios.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitGate = 4;

void print_error_record(const std::string& type, const std::string& message,
                        const std::vector<std::string>& details = {}) {
  nlohmann::json j;
  j["error"]["type"] = type;
  j["error"]["message"] = message;
  if (!details.empty()) j["error"]["details"] = details;
  std::cerr << j.dump() << "\n";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const maser::ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const maser::FilterError*>(&e)) return kExitConfig;
  if (dynamic_cast<const maser::NumericalError*>(&e)) return kExitNumerical;
  if (dynamic_cast<const maser::GateError*>(&e)) return kExitGate;
  return kExitFailure;
}

void report_exception(const std::exception& e) {
  if (const auto* cfg = dynamic_cast<const maser::ConfigError*>(&e)) {
    print_error_record("config", "invalid configuration", cfg->violations);
  } else if (dynamic_cast<const maser::FilterError*>(&e)) {
    print_error_record("config", e.what());
  } else if (dynamic_cast<const maser::NumericalError*>(&e)) {
    print_error_record("numerical", e.what());
  } else if (dynamic_cast<const maser::GateError*>(&e)) {
    print_error_record("gate", e.what());
  } else {
    print_error_record("failure", e.what());
  }
}

void print_summary(const maser::RunReport& report) {
  std::size_t rows = 0;
  for (const auto& b : report.blocks) rows += b.rows.size();
  std::cout << "mode " << report.config.mode;
  if (report.config.mode == "sweep")
    std::cout << " (" << report.effective_mode << ", " << report.blocks.size()
              << " points)";
  std::cout << ", " << rows << " rows -> " << report.config.output_path << "\n";
  for (const auto& g : report.gates)
    std::cout << "gate " << g.name << ": value " << maser::format_double(g.value)
              << ", threshold " << maser::format_double(g.threshold) << " -> "
              << (g.pass ? "pass" : "FAIL") << "\n";
  std::printf("wall time %.1f ms\n", report.wall_ms);
}

int do_run(const std::string& config_path, const std::string& mode_override,
           const std::string& out_override, int workers_override,
           long long seed_override) {
  maser::SimulationConfig config = maser::parse_config_file(config_path);
  std::vector<std::pair<std::string, std::string>> overrides;
  if (!mode_override.empty()) overrides.emplace_back("run.mode", mode_override);
  if (!out_override.empty()) overrides.emplace_back("output.path", out_override);
  if (workers_override > 0)
    overrides.emplace_back("run.workers", std::to_string(workers_override));
  if (seed_override >= 0)
    overrides.emplace_back("run.seed", std::to_string(seed_override));
  if (!overrides.empty()) config = maser::reparse_with_overrides(config, overrides);

  const maser::RunReport report = maser::run(config);
  maser::emit_csv(report, report.config.output_path);
  maser::emit_json(report, maser::json_sidecar_path(report.config.output_path));
  print_summary(report);
  if (!report.gates_passed()) {
    std::vector<std::string> failing;
    for (const auto& g : report.gates)
      if (!g.pass)
        failing.push_back(g.name + ": value " + maser::format_double(g.value) +
                          " exceeds " + maser::format_double(g.threshold));
    print_error_record("gate", "diagnostic gate failure", failing);
    return kExitGate;
  }
  return kExitOk;
}

int do_validate(const std::string& config_path) {
  const maser::SimulationConfig config = maser::parse_config_file(config_path);
  std::cout << "OK: " << config_path << " (mode " << config.mode << ")\n";
  return kExitOk;
}

int do_scenarios_list() {
  for (const auto& s : maser::scenario_registry())
    std::cout << s.name << " - " << s.description << "\n";
  return kExitOk;
}

int do_scenarios_run(const std::string& name, const std::string& out_override) {
  const maser::Scenario* scenario = maser::find_scenario(name);
  if (!scenario) {
    print_error_record("config", "unknown scenario '" + name + "'");
    return kExitConfig;
  }
  const maser::RunReport report = maser::run_scenario(*scenario, out_override);
  print_summary(report);
  std::cout << "scenario " << name << ": pass\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maser - periodically pumped cavity field simulator"};
  app.require_subcommand(1);

  std::string config_path, mode_override, out_override, scenario_name;
  int workers_override = 0;
  long long seed_override = -1;

  auto* run_cmd = app.add_subcommand("run", "execute a configuration");
  run_cmd->add_option("config", config_path, "configuration file")->required();
  run_cmd->add_option("--mode", mode_override, "override run.mode");
  run_cmd->add_option("--out", out_override, "override output.path");
  run_cmd->add_option("--workers", workers_override, "override run.workers");
  run_cmd->add_option("--seed", seed_override, "override run.seed");

  auto* validate_cmd = app.add_subcommand("validate", "check a configuration");
  validate_cmd->add_option("config", config_path, "configuration file")->required();

  auto* scen_cmd = app.add_subcommand("scenarios", "shipped acceptance scenarios");
  scen_cmd->require_subcommand(1);
  scen_cmd->add_subcommand("list", "list scenario names");
  auto* scen_run = scen_cmd->add_subcommand("run", "run one scenario");
  scen_run->add_option("name", scenario_name, "scenario name")->required();
  scen_run->add_option("--out", out_override, "override output.path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed())
      return do_run(config_path, mode_override, out_override, workers_override,
                    seed_override);
    if (validate_cmd->parsed()) return do_validate(config_path);
    if (scen_cmd->parsed()) {
      if (scen_cmd->get_subcommand("list")->parsed()) return do_scenarios_list();
      return do_scenarios_run(scenario_name, out_override);
    }
  } catch (const std::exception& e) {
    report_exception(e);
    return exit_code_for(e);
  }
  return kExitFailure;
}
