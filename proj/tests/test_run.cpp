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

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "maser/run.hpp"
#include "maser/scenarios.hpp"

using namespace maser;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("micro run matches the analytic decay through the full pipeline") {
  const SimulationConfig cfg = parse_config(R"(
[cavity]
n_max = 12
kappa = 1
[pump]
theta = 0
period = 0.1
p = 0:1
[run]
mode = micro
n_periods = 30
initial = fock:1
[gates]
decay_oracle = 1e-9
)");
  const RunReport report = run(cfg);
  CHECK(report.gates_passed());
  REQUIRE(report.blocks.size() == 1);
  for (const auto& row : report.blocks[0].rows) {
    if (row.mode != "micro_raw") continue;
    CHECK(std::abs(row.stats.mean_n - std::exp(-row.time)) < 1e-9);
  }
}

TEST_CASE("csv schema") {
  SUBCASE("empty report is header-only") {
    RunReport report;
    report.effective_mode = "micro";
    CHECK(csv_string(report) ==
          "time,mode,mean_n,variance,mandel_q,purity,top_level_population\n");
  }
  SUBCASE("compare mode adds the deviation column, micro does not") {
    RunReport report;
    report.effective_mode = "compare";
    CHECK(lines_of(csv_string(report))[0] ==
          "time,mode,mean_n,variance,mandel_q,purity,top_level_population,dev_mean_n");
  }
  SUBCASE("absent Mandel Q renders as an empty field") {
    const SimulationConfig cfg = parse_config(R"(
[cavity]
n_max = 3
kappa = 1
[pump]
theta = 0
period = 0.1
p = 0:1
[filter]
width_periods = 1
[run]
mode = micro
n_periods = 1
samples_per_period = 1
)");
    const RunReport report = run(cfg);
    const auto lines = lines_of(csv_string(report));
    REQUIRE(lines.size() >= 2);
    CHECK(lines[1].find("0,micro_raw,0,0,,1,0") == 0);
  }
}

TEST_CASE("sweep blocks reproduce standalone runs") {
  const std::string base = R"(
[cavity]
n_max = 6
kappa = 1
[pump]
theta = 0.5
period = 0.2
p = 1:1
[filter]
width_periods = 2
[run]
mode = sweep
n_periods = 6
samples_per_period = 2
[sweep]
mode = micro
pump.theta = 0.5; 1.0
)";
  const RunReport sweep_report = run(parse_config(base));
  REQUIRE(sweep_report.blocks.size() == 2);
  CHECK(sweep_report.effective_mode == "micro");

  for (int i = 0; i < 2; ++i) {
    const std::string theta = i == 0 ? "0.5" : "1.0";
    SimulationConfig solo = parse_config(base);
    solo = reparse_with_overrides(solo, {{"run.mode", "micro"}, {"pump.theta", theta}});
    const RunReport solo_report = run(solo);
    const auto& a = sweep_report.blocks[i].rows;
    const auto& b = solo_report.blocks[0].rows;
    REQUIRE(a.size() == b.size());
    for (std::size_t r = 0; r < a.size(); ++r) {
      CHECK(a[r].time == b[r].time);
      CHECK(a[r].stats.mean_n == b[r].stats.mean_n);
      CHECK(a[r].stats.purity == b[r].stats.purity);
    }
    CHECK(sweep_report.blocks[i].labels[0].second == theta);
  }
}

TEST_CASE("stochastic mode is deterministic and consistent") {
  const std::string doc = R"(
[cavity]
n_max = 3
kappa = 1
n_th = 0.1
[pump]
theta = 0.9
period = 0.2
p = 0:0.5, 1:0.5
[run]
mode = stochastic
n_periods = 15
samples_per_period = 2
realizations = 60
seed = 31415
workers = 2
[gates]
stochastic_consistency = 4
)";
  const RunReport first = run(parse_config(doc));
  const RunReport second = run(parse_config(doc));
  CHECK(csv_string(first) == csv_string(second));
  CHECK(first.gates_passed());
  CHECK(first.blocks[0].diagnostics.values.count("stochastic_max_z") == 1);
}

TEST_CASE("compare mode produces deviation columns and gates") {
  const SimulationConfig cfg = parse_config(R"(
[cavity]
n_max = 14
kappa = 1
n_th = 0.1
[pump]
theta = 1.0
period = 0.1
p = 1:1
[filter]
width_periods = 4
[run]
mode = compare
n_periods = 120
samples_per_period = 4
[gates]
max_dev_mean_n = 5e-2
max_trace_distance = 1e-1
)");
  const RunReport report = run(cfg);
  CHECK(report.gates_passed());
  bool saw_macro_dev = false;
  for (const auto& row : report.blocks[0].rows)
    if (row.mode == "macro" && row.dev_mean_n) saw_macro_dev = true;
  CHECK(saw_macro_dev);
  CHECK(report.blocks[0].diagnostics.values.at("max_dev_mean_n") < 5e-2);
}

TEST_CASE("json sidecar") {
  CHECK(json_sidecar_path("out.csv") == "out.json");
  CHECK(json_sidecar_path("dir.v2/out.csv") == "dir.v2/out.json");
  CHECK(json_sidecar_path("plain") == "plain.json");
  const SimulationConfig cfg = parse_config(R"(
[cavity]
n_max = 3
kappa = 1
[pump]
theta = 0
period = 0.1
p = 0:1
[filter]
width_periods = 1
[run]
mode = micro
n_periods = 1
)");
  const RunReport report = run(cfg);
  const std::string j = json_string(report);
  CHECK(j.find("\"config\"") != std::string::npos);
  CHECK(j.find("\"kick_trace_loss\"") != std::string::npos);
  CHECK(j.find("\"gates_passed\": true") != std::string::npos);
}

TEST_CASE("scenario registry is wired into the repo") {
  CHECK(scenario_registry().size() == 9);
  CHECK(find_scenario("micro-macro-agreement") != nullptr);
  CHECK(find_scenario("no-such-thing") == nullptr);
  // Shipped files match the embedded documents.
  for (const auto& s : scenario_registry()) {
    const std::string path = std::string(MASER_SOURCE_DIR) + "/scenarios/" + s.name + ".ini";
    std::ifstream f(path);
    REQUIRE_MESSAGE(f.good(), ("missing " + path).c_str());
    std::ostringstream buf;
    buf << f.rdbuf();
    CHECK_MESSAGE(buf.str() == s.config_text,
                  (path + " differs from the embedded text").c_str());
    // Every scenario config parses.
    CHECK_NOTHROW(parse_config(s.config_text));
  }
}
