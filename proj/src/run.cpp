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

#include "maser/run.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "maser/macro.hpp"

namespace maser {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Objects every mode needs, assembled once per grid point.
struct Engine {
  SimulationConfig cfg;
  FockSpace space;
  Superoperator liouvillian;
  InjectionStatistics stats;
  KickFamily family;
  Superoperator kick;  // K
  CoarseGrainFilter filter;
  PumpSchedule schedule;
  MacroOptions macro_options;

  explicit Engine(const SimulationConfig& config)
      : cfg(config),
        space(config.space()),
        liouvillian(build_cavity_liouvillian(space, {config.kappa, config.n_th})),
        stats(InjectionStatistics::from_table(config.p)),
        family(jc_kick_family({space, config.theta}, stats.k_max())),
        kick(average_kick(stats, family)),
        filter(config.filter()),
        schedule(config.schedule()) {
    macro_options.kernel_tol = default_kernel_tol(config.kappa);
    macro_options.l_max = config.series_l_max;
    macro_options.tail_tol = config.series_tail_tol;
  }

  MacroMethod method() const {
    return cfg.method == "series" ? MacroMethod::series : MacroMethod::spectral;
  }
  MacroMethod other_method() const {
    return cfg.method == "series" ? MacroMethod::spectral : MacroMethod::series;
  }
};

struct PointOutcome {
  ReportBlock block;
  std::vector<GateResult> gates;
};

ObservableRow make_row(double time, const char* mode, const Matrix& state,
                       FockSpace space) {
  ObservableRow row;
  row.time = time;
  row.mode = mode;
  row.stats = photon_statistics(state, space);
  return row;
}

class GateSink {
 public:
  GateSink(const SimulationConfig& cfg, std::vector<GateResult>* out)
      : cfg_(cfg), out_(out) {}

  bool enabled(const std::string& name) const { return cfg_.gates.count(name) > 0; }

  /// Every gate is normalized to "value <= threshold".
  void report(const std::string& name, double value, const std::string& note = "") {
    if (!enabled(name)) return;
    GateResult g;
    g.name = name;
    g.threshold = cfg_.gates.at(name);
    g.value = value;
    g.pass = value <= g.threshold;
    g.note = note;
    out_->push_back(std::move(g));
  }

 private:
  const SimulationConfig& cfg_;
  std::vector<GateResult>* out_;
};

double max_top_level(const std::vector<ObservableRow>& rows) {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.stats.top_level_population);
  return m;
}

void structural_gates(const Engine& eng, GateSink& gates) {
  if (gates.enabled("spectrum_re_max")) {
    const SpectralDecomposition dec = spectral_decompose(eng.liouvillian);
    gates.report("spectrum_re_max", dec.eigenvalues.real().maxCoeff());
  }
  if (gates.enabled("choi_min")) {
    const Superoperator decay = propagator(eng.liouvillian, eng.schedule.period);
    const Superoperator channel = identity_superoperator(eng.space) + eng.kick;
    double worst = -kInf;
    for (const Superoperator* map : {&decay, &channel}) {
      const Matrix choi = choi_matrix(*map);
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (choi + choi.adjoint().eval()),
                                               Eigen::EigenvaluesOnly);
      worst = std::max(worst, -es.eigenvalues().minCoeff());
    }
    gates.report("choi_min", worst);
  }
  if (gates.enabled("strobo_trace")) {
    const Matrix map =
        propagator(eng.liouvillian, eng.schedule.period).matrix *
        (Matrix::Identity(eng.space.dim2(), eng.space.dim2()) + eng.kick.matrix);
    const Vector trace_functional = vec(Matrix::Identity(eng.space.dim(), eng.space.dim()));
    const Vector residual =
        map.adjoint() * trace_functional - trace_functional;
    gates.report("strobo_trace", residual.cwiseAbs().maxCoeff());
  }
}

void micro_gates(const Engine& eng, const Trajectory& traj,
                 const std::vector<ObservableRow>& rows, GateSink& gates) {
  gates.report("top_level_population", max_top_level(rows));
  gates.report("truncation_flux", std::abs(traj.kick_trace_loss));
  if (gates.enabled("decay_oracle")) {
    if (eng.stats.probabilities.size() != 1 || eng.stats.probabilities[0] != 1.0) {
      gates.report("decay_oracle", kInf, "decay oracle requires p = {0:1}");
    } else {
      const double n0 = photon_statistics(initial_state(eng.cfg).matrix, eng.space).mean_n;
      double worst = 0.0;
      for (std::size_t g = 0; g < traj.times.size(); ++g) {
        const double expected = n0 * std::exp(-eng.cfg.kappa * traj.times[g]) +
                                eng.cfg.n_th * (1.0 - std::exp(-eng.cfg.kappa * traj.times[g]));
        const double got = photon_statistics(traj.states[g], eng.space).mean_n;
        worst = std::max(worst, std::abs(got - expected));
      }
      gates.report("decay_oracle", worst);
    }
  }
}

struct MacroSide {
  MacroGenerator gen;
  std::vector<double> times;
  std::vector<Matrix> states;
  long first_grid_index = 0;
};

void macro_diagnostics_and_gates(const Engine& eng, const MacroGenerator& gen,
                                 BlockDiagnostics& diag, GateSink& gates) {
  diag.values["kernel_dim"] = gen.diagnostics.kernel_dim;
  diag.values["series_length"] = double(gen.diagnostics.series_length);
  diag.values["series_tail_bound"] = gen.diagnostics.series_tail_bound;
  diag.values["reconstruction_residual"] = gen.diagnostics.reconstruction_residual;
  diag.values["condition_estimate"] = gen.diagnostics.condition_estimate;

  // Deviation of the pump part from the rate-equation limit K/T.
  const double k_norm = eng.kick.matrix.norm();
  if (k_norm > 0) {
    const Matrix rate = eng.kick.matrix / eng.schedule.period;
    diag.values["pump_rate_deviation"] = (gen.pump_part.matrix - rate).norm() / rate.norm();
  } else {
    diag.values["pump_rate_deviation"] = 0.0;
  }

  gates.report("series_tail", gen.diagnostics.series_tail_bound);

  if (gates.enabled("method_residual")) {
    const Superoperator other =
        eng.other_method() == MacroMethod::spectral
            ? pump_generator_spectral(eng.kick, eng.liouvillian, eng.schedule.period,
                                      eng.macro_options.kernel_tol)
            : pump_generator_series(eng.kick, eng.liouvillian, eng.schedule.period,
                                    eng.macro_options.l_max, eng.macro_options.tail_tol,
                                    eng.macro_options.kernel_tol);
    const double scale = std::max(gen.pump_part.matrix.norm(), 1e-300);
    const double residual = (gen.pump_part.matrix - other.matrix).norm() / scale;
    diag.values["method_residual"] = residual;
    gates.report("method_residual", residual);
  }

  const bool want_steady = gates.enabled("kernel_residual") ||
                           gates.enabled("steady_state_trace_distance") ||
                           eng.cfg.mode != "sweep";
  if (!want_steady) return;
  try {
    const DensityOperator ss = steady_state(gen);
    const PhotonStatistics stats = photon_statistics(ss.matrix, eng.space);
    diag.values["steady_mean_n"] = stats.mean_n;
    diag.values["steady_variance"] = stats.variance;
    if (stats.mandel_q) diag.values["steady_mandel_q"] = *stats.mandel_q;
    const double residual =
        (gen.generator.matrix * vec(ss.matrix)).norm() /
        (gen.generator.matrix.norm() * vec(ss.matrix).norm());
    diag.values["kernel_residual"] = residual;
    gates.report("kernel_residual", residual);

    if (gates.enabled("steady_state_trace_distance")) {
      const FixedPointResult fp = stroboscopic_fixed_point(
          eng.liouvillian, eng.kick, eng.schedule.period,
          initial_state(eng.cfg).matrix);
      Matrix start = 0.5 * (fp.state + fp.state.adjoint().eval());
      start /= start.trace();
      const Trajectory cycle = evolve_micro(
          DensityOperator::from_matrix(eng.space, start), eng.liouvillian, eng.kick,
          eng.schedule, 1, eng.cfg.samples_per_period);
      const Matrix reference = limit_cycle_average(cycle, eng.filter);
      diag.values["limit_cycle_periods"] = fp.periods;
      const double td = trace_distance(ss.matrix, reference);
      diag.values["steady_state_trace_distance"] = td;
      gates.report("steady_state_trace_distance", td);
    }
  } catch (const NumericalError& e) {
    diag.notes["steady_state_error"] = e.what();
    gates.report("kernel_residual", kInf, e.what());
    gates.report("steady_state_trace_distance", kInf, e.what());
  }
}

/// Macro trajectory on the shared sample grid.
MacroSide evolve_macro_side(const Engine& eng, const MacroGenerator& gen) {
  MacroSide side{gen, {}, {}, 0};
  const double dt = eng.schedule.period / eng.cfg.samples_per_period;
  const long last = eng.cfg.n_periods * eng.cfg.samples_per_period;

  Matrix state;
  if (eng.cfg.macro_seed == "plain") {
    side.first_grid_index = 0;
    state = initial_state(eng.cfg).matrix;
  } else {
    side.first_grid_index = std::lround(eng.filter.width / dt);
    state = macro_initial_state(initial_state(eng.cfg), eng.liouvillian, eng.kick,
                                eng.schedule, eng.filter, eng.cfg.samples_per_period);
  }
  const Superoperator step = propagator(gen.generator, dt);
  for (long g = side.first_grid_index; g <= last; ++g) {
    side.times.push_back(g * dt);
    if (g == side.first_grid_index)
      side.states.push_back(state);
    else
      side.states.push_back(step.apply(side.states.back()));
  }
  return side;
}

PointOutcome run_micro(const Engine& eng) {
  PointOutcome out;
  GateSink gates(eng.cfg, &out.gates);
  const Trajectory traj =
      evolve_micro(initial_state(eng.cfg), eng.liouvillian, eng.kick, eng.schedule,
                   static_cast<int>(eng.cfg.n_periods), eng.cfg.samples_per_period);
  const Trajectory coarse = coarse_grain(traj, eng.filter);

  for (std::size_t g = 0; g < traj.times.size(); ++g)
    out.block.rows.push_back(make_row(traj.times[g], "micro_raw", traj.states[g], eng.space));
  for (std::size_t g = 0; g < coarse.times.size(); ++g)
    out.block.rows.push_back(
        make_row(coarse.times[g], "micro_coarse", coarse.states[g], eng.space));

  out.block.diagnostics.values["kick_trace_loss"] = traj.kick_trace_loss;
  out.block.diagnostics.values["max_top_level_population"] = max_top_level(out.block.rows);
  micro_gates(eng, traj, out.block.rows, gates);
  structural_gates(eng, gates);
  return out;
}

PointOutcome run_macro(const Engine& eng) {
  PointOutcome out;
  GateSink gates(eng.cfg, &out.gates);
  const MacroGenerator gen =
      build_macro_generator(eng.kick, eng.liouvillian, eng.schedule.period, eng.method(),
                            eng.macro_options);
  const MacroSide side = evolve_macro_side(eng, gen);
  for (std::size_t g = 0; g < side.times.size(); ++g)
    out.block.rows.push_back(make_row(side.times[g], "macro", side.states[g], eng.space));

  out.block.diagnostics.values["max_top_level_population"] = max_top_level(out.block.rows);
  gates.report("top_level_population", max_top_level(out.block.rows));
  macro_diagnostics_and_gates(eng, gen, out.block.diagnostics, gates);
  structural_gates(eng, gates);
  return out;
}

PointOutcome run_compare(const Engine& eng) {
  PointOutcome out;
  GateSink gates(eng.cfg, &out.gates);

  Trajectory coarse;
  double kick_loss = 0.0;
  {
    const Trajectory traj =
        evolve_micro(initial_state(eng.cfg), eng.liouvillian, eng.kick, eng.schedule,
                     static_cast<int>(eng.cfg.n_periods), eng.cfg.samples_per_period);
    kick_loss = traj.kick_trace_loss;
    coarse = coarse_grain(traj, eng.filter);
  }

  const MacroGenerator gen =
      build_macro_generator(eng.kick, eng.liouvillian, eng.schedule.period, eng.method(),
                            eng.macro_options);
  const MacroSide side = evolve_macro_side(eng, gen);

  for (std::size_t g = 0; g < coarse.times.size(); ++g)
    out.block.rows.push_back(
        make_row(coarse.times[g], "micro_coarse", coarse.states[g], eng.space));

  // Shared grid: coarse sample g corresponds to grid index g + n0.
  const long coarse_first = std::lround(eng.filter.width / coarse.dt);
  double max_dev = 0.0, max_td = 0.0;
  for (std::size_t g = 0; g < side.times.size(); ++g) {
    ObservableRow row = make_row(side.times[g], "macro", side.states[g], eng.space);
    const long grid = side.first_grid_index + static_cast<long>(g);
    const long coarse_idx = grid - coarse_first;
    if (coarse_idx >= 0 && coarse_idx < static_cast<long>(coarse.states.size())) {
      const double micro_mean =
          photon_statistics(coarse.states[coarse_idx], eng.space).mean_n;
      const double dev =
          std::abs(row.stats.mean_n - micro_mean) / std::max(1.0, micro_mean);
      row.dev_mean_n = dev;
      max_dev = std::max(max_dev, dev);
      max_td = std::max(max_td, trace_distance(side.states[g], coarse.states[coarse_idx]));
    }
    out.block.rows.push_back(std::move(row));
  }

  out.block.diagnostics.values["kick_trace_loss"] = kick_loss;
  out.block.diagnostics.values["max_dev_mean_n"] = max_dev;
  out.block.diagnostics.values["max_trace_distance"] = max_td;
  out.block.diagnostics.values["max_top_level_population"] = max_top_level(out.block.rows);

  gates.report("max_dev_mean_n", max_dev);
  gates.report("max_trace_distance", max_td);
  gates.report("top_level_population", max_top_level(out.block.rows));
  gates.report("truncation_flux", std::abs(kick_loss));
  macro_diagnostics_and_gates(eng, gen, out.block.diagnostics, gates);
  structural_gates(eng, gates);
  return out;
}

PointOutcome run_stochastic(const Engine& eng) {
  PointOutcome out;
  GateSink gates(eng.cfg, &out.gates);

  const int realizations = eng.cfg.realizations;
  const int n_periods = static_cast<int>(eng.cfg.n_periods);
  const int spp = eng.cfg.samples_per_period;
  const std::size_t samples = std::size_t(n_periods) * spp + 1;
  const DensityOperator rho0 = initial_state(eng.cfg);

  // Per-realization mean photon traces (for standard errors) plus
  // worker-local running state sums merged in worker order.
  std::vector<std::vector<double>> mean_traces(realizations);
  const int workers = std::max(1, std::min(eng.cfg.workers, realizations));
  std::vector<std::vector<Matrix>> partial_sums(workers);
  std::vector<double> partial_loss(workers, 0.0);
  std::vector<std::exception_ptr> failures(workers);

  auto work = [&](int w) {
    try {
      std::vector<Matrix> sum(samples,
                              Matrix::Zero(eng.space.dim(), eng.space.dim()));
      for (int r = w; r < realizations; r += workers) {
        const Trajectory traj = evolve_micro_stochastic(
            rho0, eng.liouvillian, eng.family, eng.stats, eng.schedule, n_periods, spp,
            eng.cfg.seed + std::uint64_t(r));
        auto& trace = mean_traces[r];
        trace.resize(samples);
        for (std::size_t g = 0; g < samples; ++g) {
          sum[g] += traj.states[g];
          trace[g] = photon_statistics(traj.states[g], eng.space).mean_n;
        }
        partial_loss[w] += traj.kick_trace_loss;
      }
      partial_sums[w] = std::move(sum);
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);

  std::vector<Matrix> mean_states(samples, Matrix::Zero(eng.space.dim(), eng.space.dim()));
  double total_loss = 0.0;
  for (int w = 0; w < workers; ++w) {
    for (std::size_t g = 0; g < samples; ++g) mean_states[g] += partial_sums[w][g];
    total_loss += partial_loss[w];
  }
  for (auto& m : mean_states) m /= double(realizations);

  const double dt = eng.schedule.period / spp;
  for (std::size_t g = 0; g < samples; ++g)
    out.block.rows.push_back(make_row(g * dt, "stochastic_mean", mean_states[g], eng.space));

  out.block.diagnostics.values["realizations"] = realizations;
  out.block.diagnostics.values["kick_trace_loss_total"] = total_loss;
  out.block.diagnostics.values["max_top_level_population"] = max_top_level(out.block.rows);
  gates.report("top_level_population", max_top_level(out.block.rows));
  gates.report("truncation_flux", std::abs(total_loss) / realizations);

  if (gates.enabled("stochastic_consistency")) {
    const Trajectory det =
        evolve_micro(rho0, eng.liouvillian, eng.kick, eng.schedule, n_periods, spp);
    double max_z = 0.0;
    for (std::size_t g = 0; g < samples; ++g) {
      double mean = 0.0;
      for (int r = 0; r < realizations; ++r) mean += mean_traces[r][g];
      mean /= realizations;
      double var = 0.0;
      for (int r = 0; r < realizations; ++r) {
        const double d = mean_traces[r][g] - mean;
        var += d * d;
      }
      var /= std::max(1, realizations - 1);
      const double se = std::sqrt(var / realizations);
      const double det_mean = photon_statistics(det.states[g], eng.space).mean_n;
      const double gap = std::abs(mean - det_mean);
      if (se > 0)
        max_z = std::max(max_z, gap / se);
      else if (gap > 1e-12)
        max_z = kInf;
    }
    out.block.diagnostics.values["stochastic_max_z"] = max_z;
    gates.report("stochastic_consistency", max_z);
  }
  structural_gates(eng, gates);
  return out;
}

PointOutcome run_point(const SimulationConfig& cfg) {
  const Engine eng(cfg);
  if (cfg.mode == "micro") return run_micro(eng);
  if (cfg.mode == "macro") return run_macro(eng);
  if (cfg.mode == "compare") return run_compare(eng);
  if (cfg.mode == "stochastic") return run_stochastic(eng);
  throw Error("run: unsupported mode '" + cfg.mode + "'");
}

void merge_gates(std::vector<GateResult>& into, const std::vector<GateResult>& from,
                 int point_index) {
  for (const auto& g : from) {
    GateResult* found = nullptr;
    for (auto& existing : into)
      if (existing.name == g.name) found = &existing;
    if (!found) {
      into.push_back(g);
      if (!g.pass && into.back().note.empty())
        into.back().note = "worst at point " + std::to_string(point_index);
      continue;
    }
    if (g.value > found->value) {
      found->value = g.value;
      found->pass = g.pass;
      found->note = g.note.empty() ? "worst at point " + std::to_string(point_index)
                                   : g.note;
    }
  }
}

}  // namespace

RunReport run(const SimulationConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = config;

  if (config.mode == "sweep") {
    report.effective_mode = config.sweep->mode;
    auto points = expand_sweep(config);
    std::vector<PointOutcome> outcomes(points.size());
    std::vector<std::exception_ptr> failures(points.size());
    // Grid points are independent; inner runs stay single-threaded.
    for (auto& p : points) p.config.workers = 1;

    const int workers =
        std::max(1, std::min<int>(config.workers, static_cast<int>(points.size())));
    auto work = [&](int w) {
      for (std::size_t i = w; i < points.size(); i += workers) {
        try {
          outcomes[i] = run_point(points[i].config);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }
    for (auto& f : failures)
      if (f) std::rethrow_exception(f);

    for (std::size_t i = 0; i < points.size(); ++i) {
      outcomes[i].block.index = static_cast<int>(i);
      outcomes[i].block.labels = points[i].labels;
      merge_gates(report.gates, outcomes[i].gates, static_cast<int>(i));
      report.blocks.push_back(std::move(outcomes[i].block));
    }
  } else {
    report.effective_mode = config.mode;
    PointOutcome outcome = run_point(config);
    report.gates = std::move(outcome.gates);
    report.blocks.push_back(std::move(outcome.block));
  }

  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

}  // namespace maser
