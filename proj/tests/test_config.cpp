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

#include <string>

#include "maser/config.hpp"

using namespace maser;

namespace {

const std::string kMinimal = R"(
[cavity]
n_max = 10
kappa = 1
[pump]
theta = 1.0
period = 0.1
p = 1:1
[run]
mode = micro
n_periods = 100
)";

bool mentions(const ConfigError& e, const std::string& needle) {
  for (const auto& v : e.violations)
    if (v.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("minimal document fills documented defaults") {
  const SimulationConfig cfg = parse_config(kMinimal);
  CHECK(cfg.n_max == 10);
  CHECK(cfg.kappa == 1.0);
  CHECK(cfg.n_th == 0.0);
  CHECK(cfg.samples_per_period == 8);
  CHECK(cfg.filter_kind == CoarseGrainFilter::Kind::rectangular);
  CHECK(cfg.filter_width == doctest::Approx(1.0));  // 10 periods
  CHECK(cfg.method == "spectral");
  CHECK(cfg.initial == "vacuum");
  CHECK(cfg.macro_seed == "filtered");
  CHECK(cfg.seed == 1);
  CHECK(cfg.workers == 1);
  CHECK(cfg.echo.at("filter.width") == "1");
  CHECK(cfg.p.size() == 2);
  CHECK(cfg.p[1] == 1.0);
}

TEST_CASE("violations are collected, not truncated") {
  const std::string bad = R"(
[cavity]
n_max = 0
kappa = -1
[pump]
theta = 1.0
period = 0.1
p = 1:0.6, 2:0.6
[filter]
width = 0.05
[run]
mode = warp
n_periods = 0
)";
  try {
    parse_config(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "n_max"));
    CHECK(mentions(e, "kappa"));
    CHECK(mentions(e, "injection probabilities sum to 1.2"));
    CHECK(mentions(e, "filter width below injection period"));
    CHECK(mentions(e, "unknown mode 'warp'"));
    CHECK(mentions(e, "n_periods"));
    CHECK(e.violations.size() >= 6);
  }
}

TEST_CASE("unknown keys are rejected with line numbers") {
  const std::string doc = kMinimal + "\n[cavity]\nnmax = 3\n";
  try {
    parse_config(doc);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "unknown key cavity.nmax"));
    CHECK(mentions(e, "line"));
  }
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_config("[cavity\nn_max = 3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "line 1"));
  }
  try {
    parse_config("n_max = 3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "outside any [section]"));
  }
}

TEST_CASE("initial state parsing") {
  CHECK(parse_config(kMinimal + "[run]\ninitial = fock:10\n").initial == "fock:10");
  CHECK_THROWS_AS(parse_config(kMinimal + "[run]\ninitial = fock:11\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(kMinimal + "[run]\ninitial = coherent:2\n"), ConfigError);
  const SimulationConfig cfg = parse_config(kMinimal + "[run]\ninitial = thermal:0.4\n");
  const DensityOperator rho = initial_state(cfg);
  CHECK(rho.matrix(0, 0).real() > 0.5);
}

TEST_CASE("duplicate keys are rejected") {
  CHECK_THROWS_AS(parse_config(kMinimal + "[cavity]\nn_max = 4\n"), ConfigError);
}

TEST_CASE("gate applicability is checked against the mode") {
  CHECK_THROWS_AS(parse_config(kMinimal + "[gates]\nmax_dev_mean_n = 1e-2\n"),
                  ConfigError);
  const SimulationConfig cfg =
      parse_config(kMinimal + "[gates]\ndecay_oracle = 1e-9\n");
  CHECK(cfg.gates.at("decay_oracle") == 1e-9);
  CHECK_THROWS_AS(parse_config(kMinimal + "[gates]\nno_such_gate = 1\n"), ConfigError);
}

TEST_CASE("sweep expansion") {
  const std::string doc = R"(
[cavity]
n_max = 6
kappa = 1
[pump]
theta = 1.0
period = 0.1
p = 1:1
[filter]
width_periods = 2
[run]
mode = sweep
n_periods = 10
[sweep]
mode = micro
pump.theta = 0.5; 1.0
cavity.n_th = 0; 0.2; 0.4
)";
  const SimulationConfig cfg = parse_config(doc);
  REQUIRE(cfg.sweep.has_value());
  const auto points = expand_sweep(cfg);
  REQUIRE(points.size() == 6);
  // Declaration order: theta is the outer axis, n_th the fast one.
  CHECK(points[0].labels[0].second == "0.5");
  CHECK(points[0].labels[1].second == "0");
  CHECK(points[1].labels[1].second == "0.2");
  CHECK(points[3].labels[0].second == "1.0");
  CHECK(points[0].config.mode == "micro");
  CHECK(points[0].config.theta == 0.5);
  CHECK(points[5].config.n_th == 0.4);

  SUBCASE("derived defaults re-derive per point") {
    const std::string swept_period = R"(
[cavity]
n_max = 6
kappa = 1
[pump]
theta = 1.0
period = 0.1
p = 1:1
[filter]
width_periods = 1
[run]
mode = sweep
n_periods = 1
[sweep]
mode = macro
pump.period = 0.1; 0.5
)";
    const auto pts = expand_sweep(parse_config(swept_period));
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].config.filter_width == doctest::Approx(0.1));
    CHECK(pts[1].config.filter_width == doctest::Approx(0.5));
  }
}

TEST_CASE("sweep section misuse") {
  CHECK_THROWS_AS(parse_config(kMinimal + "[sweep]\nmode = micro\npump.theta = 1; 2\n"),
                  ConfigError);
  const std::string no_axes = R"(
[cavity]
n_max = 4
kappa = 1
[pump]
theta = 1
period = 0.1
p = 1:1
[run]
mode = sweep
n_periods = 1
[sweep]
mode = micro
)";
  CHECK_THROWS_AS(parse_config(no_axes), ConfigError);
  CHECK_THROWS_AS(parse_config(no_axes + "run.seed = 1; 2\n"), ConfigError);
}

TEST_CASE("overrides are revalidated") {
  const SimulationConfig cfg = parse_config(kMinimal);
  const SimulationConfig reseeded =
      reparse_with_overrides(cfg, {{"run.seed", "77"}, {"output.path", "x.csv"}});
  CHECK(reseeded.seed == 77);
  CHECK(reseeded.output_path == "x.csv");
  CHECK_THROWS_AS(reparse_with_overrides(cfg, {{"run.mode", "warp"}}), ConfigError);
}

TEST_CASE("width and width_periods are mutually exclusive") {
  CHECK_THROWS_AS(parse_config(kMinimal + "[filter]\nwidth = 1\nwidth_periods = 10\n"),
                  ConfigError);
}
