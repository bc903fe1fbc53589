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

#include "maser/scenarios.hpp"

#include <cmath>

#include "maser/macro.hpp"

namespace maser {

namespace {

// theta at which the upward transition out of |n_max> is trapped,
// sin(theta sqrt(n_max+1)) = 0; the truncated kick is then exactly
// trace preserving.
double trapping_angle(int n_max) { return M_PI / std::sqrt(n_max + 1.0); }

double block_value(const ReportBlock& block, const std::string& key) {
  auto it = block.diagnostics.values.find(key);
  if (it == block.diagnostics.values.end())
    throw GateError("scenario check: diagnostic '" + key + "' missing in block " +
                    std::to_string(block.index));
  return it->second;
}

std::string block_label(const ReportBlock& block, const std::string& key) {
  for (const auto& [k, v] : block.labels)
    if (k == key) return v;
  throw GateError("scenario check: label '" + key + "' missing in block " +
                  std::to_string(block.index));
}

void check_pump_rate_limit(const RunReport& report) {
  double r_min = std::numeric_limits<double>::infinity();
  double r_max = 0.0;
  for (const auto& block : report.blocks) {
    const double dev = block_value(block, "pump_rate_deviation");
    const double kappa = std::atof(block_label(block, "cavity.kappa").c_str());
    const double period = std::atof(block_label(block, "pump.period").c_str());
    if (kappa == 0.0) {
      if (dev > 1e-13)
        throw GateError("pump limit: L = 0 but pump part deviates from K/T by " +
                        format_double(dev));
      continue;
    }
    const double r = dev / (kappa * period);
    r_min = std::min(r_min, r);
    r_max = std::max(r_max, r);
  }
  if (!(r_max / r_min <= 3.0))
    throw GateError("pump limit: deviation does not scale with kappa*T within factor 3 "
                    "(c in [" + format_double(r_min) + ", " + format_double(r_max) + "])");
}

void check_cptp_structure(const RunReport&) {
  const CavityParams params{1.0, 0.2};
  const double period = 1.0;
  for (int n_max : {1, 3, 5}) {
    const FockSpace space{n_max};
    const Superoperator l = build_cavity_liouvillian(space, params);
    const SpectralDecomposition dec = spectral_decompose(l);
    if (dec.eigenvalues.real().maxCoeff() > 1e-10)
      throw GateError("cptp: Liouvillian eigenvalue with positive real part at n_max " +
                      std::to_string(n_max));
    const Superoperator decay = propagator(l, period);
    for (double theta : {1.0, trapping_angle(n_max)}) {
      const KickFamily family = jc_kick_family({space, theta}, 1);
      const Superoperator channel =
          identity_superoperator(space) + family.kicks.at(1);
      for (const Superoperator* map : {&decay, &channel}) {
        const Matrix choi = choi_matrix(*map);
        Eigen::SelfAdjointEigenSolver<Matrix> es(
            0.5 * (choi + choi.adjoint().eval()), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-9)
          throw GateError("cptp: Choi eigenvalue " +
                          format_double(es.eigenvalues().minCoeff()) + " at n_max " +
                          std::to_string(n_max) + ", theta " + format_double(theta));
      }
    }
    // At the trapping angle the kick leaks nothing, so the full
    // stroboscopic map must preserve the trace at matrix level.
    const KickFamily trapped = jc_kick_family({space, trapping_angle(n_max)}, 1);
    const Matrix map =
        decay.matrix * (Matrix::Identity(space.dim2(), space.dim2()) +
                        trapped.kicks.at(1).matrix);
    const Vector tau = vec(Matrix::Identity(space.dim(), space.dim()));
    const double residual = (map.adjoint() * tau - tau).cwiseAbs().maxCoeff();
    if (residual > 1e-10)
      throw GateError("cptp: stroboscopic map trace residual " +
                      format_double(residual) + " at n_max " + std::to_string(n_max));
  }
}

void check_analytic_oracles(const RunReport&) {
  const FockSpace space{20};
  // Vacuum steady state at zero temperature.
  {
    const Superoperator l = build_cavity_liouvillian(space, {1.0, 0.0});
    const MacroGenerator gen = build_macro_generator(
        zero_superoperator(space), l, 0.1, MacroMethod::spectral, {1e-9, 16, 1e-10});
    const DensityOperator ss = steady_state(gen);
    if (trace_distance(ss.matrix, fock_state(space, 0).matrix) > 1e-9)
      throw GateError("oracle: K = 0, n_th = 0 steady state is not the vacuum");
  }
  // Truncated thermal steady state.
  {
    const Superoperator l = build_cavity_liouvillian(space, {1.0, 0.5});
    const MacroGenerator gen = build_macro_generator(
        zero_superoperator(space), l, 0.1, MacroMethod::spectral, {1e-9, 16, 1e-10});
    const DensityOperator ss = steady_state(gen);
    if (trace_distance(ss.matrix, thermal_state(space, 0.5).matrix) > 1e-9)
      throw GateError("oracle: K = 0 steady state is not the truncated thermal state");
  }
  // Full emission into the vacuum at theta = pi/2.
  {
    const FockSpace small{5};
    const Superoperator m1 = single_atom_kick({small, M_PI / 2});
    const Matrix rho = fock_state(small, 0).matrix;
    const Matrix kicked = rho + m1.apply(rho);
    if ((kicked - fock_state(small, 1).matrix).cwiseAbs().maxCoeff() > 1e-12)
      throw GateError("oracle: pi/2 kick from vacuum is not |1><1|");
  }
}

void check_mandel_separation(const RunReport& report) {
  if (report.blocks.size() != 2)
    throw GateError("pump statistics: expected exactly 2 sweep points");
  const double q_regular = block_value(report.blocks[0], "steady_mandel_q");
  const double q_bursty = block_value(report.blocks[1], "steady_mandel_q");
  if (std::abs(q_regular - q_bursty) <= 1e-2)
    throw GateError("pump statistics: Mandel Q insensitive to injection statistics (" +
                    format_double(q_regular) + " vs " + format_double(q_bursty) + ")");
}

std::vector<Scenario> build_registry() {
  std::vector<Scenario> scenarios;

  scenarios.push_back(
      {"generator-equivalence",
       "spectral and series pump generators agree across a parameter grid",
       R"(# Cross-method construction of the coarse-grained generator.
[cavity]
n_max = 5
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
samples_per_period = 1
series_tail_tol = 1e-10
[sweep]
mode = macro
cavity.n_max = 5; 10; 20
cavity.n_th = 0; 0.2
pump.period = 0.1; 0.5
[gates]
method_residual = 1e-8
series_tail = 1e-10
[output]
path = generator-equivalence.csv
)",
       nullptr});

  scenarios.push_back(
      {"pump-rate-limit",
       "pump part equals K/T exactly for L = 0 and approaches it like kappa*T",
       R"(# Removable singularity and the rate-equation limit of the pump part.
[cavity]
n_max = 10
kappa = 1
[pump]
theta = 1.0
period = 0.01
p = 1:1
[filter]
width_periods = 1
[run]
mode = sweep
n_periods = 1
samples_per_period = 1
[sweep]
mode = macro
cavity.kappa = 0; 1
pump.period = 0.01; 0.001; 0.0001
[output]
path = pump-rate-limit.csv
)",
       check_pump_rate_limit});

  scenarios.push_back(
      {"micro-macro-agreement",
       "coarse-grained micro trajectory tracks the macro generator",
       R"(# Kicked micro dynamics versus the coarse-time-scale generator.
[cavity]
n_max = 30
kappa = 1
n_th = 0.1
[pump]
theta = 1.0
period = 0.05
p = 1:1
[filter]
kind = rectangular
width_periods = 10
[run]
mode = compare
n_periods = 1000
samples_per_period = 8
[gates]
max_dev_mean_n = 1e-2
max_trace_distance = 2e-2
top_level_population = 1e-6
truncation_flux = 1e-9
[output]
path = micro-macro-agreement.csv
)",
       nullptr});

  scenarios.push_back(
      {"steady-state-consistency",
       "macro steady state matches the filter-averaged micro limit cycle",
       R"(# Null state of G against the converged stroboscopic cycle.
[cavity]
n_max = 30
kappa = 1
n_th = 0.1
[pump]
theta = 1.0
period = 0.05
p = 1:1
[filter]
kind = rectangular
width_periods = 10
[run]
mode = macro
n_periods = 20
samples_per_period = 8
[gates]
steady_state_trace_distance = 1e-2
kernel_residual = 1e-10
[output]
path = steady-state-consistency.csv
)",
       nullptr});

  scenarios.push_back(
      {"cptp-structure",
       "complete positivity and trace structure of the building blocks",
       R"(# Choi positivity, trace preservation, spectrum sign (small spaces).
# theta is the trapping angle pi/sqrt(6): nothing leaves the truncated space.
[cavity]
n_max = 5
kappa = 1
n_th = 0.2
[pump]
theta = 1.2825498301618641
period = 1
p = 1:1
[filter]
width_periods = 1
[run]
mode = micro
n_periods = 20
samples_per_period = 4
[gates]
choi_min = 1e-9
strobo_trace = 1e-10
spectrum_re_max = 1e-10
truncation_flux = 1e-9
[output]
path = cptp-structure.csv
)",
       check_cptp_structure});

  scenarios.push_back(
      {"analytic-oracles",
       "closed-form damped-cavity decay, thermal steady states, pi/2 kick",
       R"(# K = 0 relaxation against the exact solution.
[cavity]
n_max = 25
kappa = 1
n_th = 0.5
[pump]
theta = 0
period = 0.1
p = 0:1
[filter]
width_periods = 10
[run]
mode = micro
n_periods = 50
samples_per_period = 8
initial = fock:1
[gates]
decay_oracle = 1e-9
truncation_flux = 1e-9
[output]
path = analytic-oracles.csv
)",
       check_analytic_oracles});

  scenarios.push_back(
      {"stochastic-consistency",
       "ensemble of single realizations reproduces the averaged dynamics",
       R"(# 2000 stochastic realizations against the deterministic kick average.
# theta is the trapping angle pi/sqrt(6), so the truncated space is exact.
[cavity]
n_max = 5
kappa = 1
[pump]
theta = 1.2825498301618641
period = 0.1
p = 0:0.5, 1:0.5
[filter]
width_periods = 1
[run]
mode = stochastic
n_periods = 200
samples_per_period = 8
realizations = 2000
seed = 20260810
workers = 2
[gates]
stochastic_consistency = 3
truncation_flux = 1e-9
[output]
path = stochastic-consistency.csv
)",
       nullptr});

  scenarios.push_back(
      {"pump-statistics-sensitivity",
       "macro steady-state Mandel Q distinguishes injection statistics at fixed flux",
       R"(# Regular single-atom ticks versus bursty pair ticks, one atom per tick
# on average.
[cavity]
n_max = 30
kappa = 1
n_th = 0.1
[pump]
theta = 1.0
period = 0.05
p = 1:1
[filter]
width_periods = 10
[run]
mode = sweep
n_periods = 10
samples_per_period = 8
[sweep]
mode = macro
pump.p = 1:1; 0:0.5, 2:0.5
[output]
path = pump-statistics-sensitivity.csv
)",
       check_mandel_separation});

  scenarios.push_back(
      {"determinism",
       "small stochastic run exercising the byte-identical output contract",
       R"(# Fixed seed, threaded ensemble; reruns must be byte-identical.
[cavity]
n_max = 4
kappa = 1
n_th = 0.1
[pump]
theta = 0.9
period = 0.2
p = 0:0.3, 1:0.5, 2:0.2
[filter]
width_periods = 2
[run]
mode = stochastic
n_periods = 30
samples_per_period = 4
realizations = 50
seed = 4242
workers = 2
[output]
path = determinism.csv
)",
       nullptr});

  return scenarios;
}

}  // namespace

const std::vector<Scenario>& scenario_registry() {
  static const std::vector<Scenario> registry = build_registry();
  return registry;
}

const Scenario* find_scenario(const std::string& name) {
  for (const auto& s : scenario_registry())
    if (s.name == name) return &s;
  return nullptr;
}

RunReport run_scenario(const Scenario& scenario, const std::string& out_override) {
  SimulationConfig config = parse_config(scenario.config_text);
  if (!out_override.empty())
    config = reparse_with_overrides(config, {{"output.path", out_override}});
  RunReport report = run(config);
  emit_csv(report, report.config.output_path);
  emit_json(report, json_sidecar_path(report.config.output_path));
  if (!report.gates_passed()) {
    std::string msg = "scenario '" + scenario.name + "': gate failures:";
    for (const auto& g : report.gates)
      if (!g.pass)
        msg += " " + g.name + " (value " + format_double(g.value) + ", threshold " +
               format_double(g.threshold) + ")";
    throw GateError(msg);
  }
  if (scenario.extra_check) scenario.extra_check(report);
  return report;
}

}  // namespace maser
