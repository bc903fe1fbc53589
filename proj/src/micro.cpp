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

#include "maser/micro.hpp"

#include <cmath>

#include "maser/observables.hpp"

namespace maser {

namespace {

constexpr double kNormalizationSlack = 0.01;

void check_evolution_args(const PumpSchedule& schedule, int n_periods,
                          int samples_per_period) {
  if (schedule.period <= 0) throw Error("evolve: period must be > 0");
  if (n_periods < 1) throw Error("evolve: n_periods must be >= 1");
  if (samples_per_period < 1) throw Error("evolve: samples_per_period must be >= 1");
}

}  // namespace

double CoarseGrainFilter::value(double tau) const {
  if (tau < 0.0 || tau > width) return 0.0;
  switch (kind) {
    case Kind::rectangular:
      return 1.0 / width;
    case Kind::triangular:
      return 4.0 / (width * width) * std::min(tau, width - tau);
    case Kind::gaussian: {
      const double sigma = width / 6.0;
      const double x = (tau - 0.5 * width) / sigma;
      const double mass = std::erf(3.0 / std::sqrt(2.0));  // truncated at 3 sigma
      return std::exp(-0.5 * x * x) / (sigma * std::sqrt(2.0 * M_PI) * mass);
    }
  }
  return 0.0;
}

Matrix stroboscopic_step(const Matrix& rho, const Superoperator& l,
                         const Superoperator& k, double period) {
  if (period <= 0) throw Error("stroboscopic_step: period must be > 0");
  const Matrix kicked = rho + k.apply(rho);
  return exp_action(l, period, kicked);
}

namespace {

Trajectory evolve_impl(const DensityOperator& rho0, const Superoperator& l,
                       PumpSchedule schedule, int n_periods, int samples_per_period,
                       const std::function<const Matrix*(int)>& kick_for_period) {
  check_evolution_args(schedule, n_periods, samples_per_period);
  if (!(rho0.space == l.space))
    throw DimensionError("evolve: state and Liouvillian spaces differ");

  Trajectory traj;
  traj.space = rho0.space;
  traj.schedule = schedule;
  traj.samples_per_period = samples_per_period;
  traj.dt = schedule.period / samples_per_period;
  const Superoperator decay = propagator(l, traj.dt);

  const std::size_t total = std::size_t(n_periods) * samples_per_period + 1;
  traj.times.reserve(total);
  traj.states.reserve(total);

  Vector state = vec(rho0.matrix);
  const int d = rho0.space.dim();
  for (int j = 0; j < n_periods; ++j) {
    const Matrix* kick = kick_for_period(j);
    if (kick) {
      const double before = unvec(state, d).trace().real();
      state = (*kick) * state;
      traj.kick_trace_loss += before - unvec(state, d).trace().real();
    }
    for (int s = 0; s < samples_per_period; ++s) {
      traj.times.push_back((std::size_t(j) * samples_per_period + s) * traj.dt);
      traj.states.push_back(unvec(state, d));
      state = decay.matrix * state;
    }
  }
  traj.times.push_back(std::size_t(n_periods) * samples_per_period * traj.dt);
  traj.states.push_back(unvec(state, d));
  return traj;
}

}  // namespace

Trajectory evolve_micro(const DensityOperator& rho0, const Superoperator& l,
                        const Superoperator& k, PumpSchedule schedule,
                        int n_periods, int samples_per_period) {
  if (!(k.space == l.space))
    throw DimensionError("evolve_micro: kick and Liouvillian spaces differ");
  const Matrix kick = Matrix::Identity(k.matrix.rows(), k.matrix.cols()) + k.matrix;
  return evolve_impl(rho0, l, schedule, n_periods, samples_per_period,
                     [&kick](int) { return &kick; });
}

Trajectory evolve_micro_stochastic(const DensityOperator& rho0, const Superoperator& l,
                                   const KickFamily& family,
                                   const InjectionStatistics& stats,
                                   PumpSchedule schedule, int n_periods,
                                   int samples_per_period, std::uint64_t seed) {
  if (!(family.space == l.space))
    throw DimensionError("evolve_micro_stochastic: kick and Liouvillian spaces differ");
  const int n2 = l.space.dim2();

  // Kick matrices (1 + M_k) for every k that can be drawn.
  std::map<int, Matrix> kicks;
  for (int k = 1; k <= stats.k_max(); ++k) {
    if (stats.probabilities[k] == 0.0) continue;
    auto it = family.kicks.find(k);
    if (it == family.kicks.end())
      throw Error("evolve_micro_stochastic: no kick operator for k = " + std::to_string(k));
    kicks.emplace(k, Matrix::Identity(n2, n2) + it->second.matrix);
  }

  std::mt19937_64 rng(seed);
  return evolve_impl(rho0, l, schedule, n_periods, samples_per_period,
                     [&](int) -> const Matrix* {
                       const int k = sample_event(stats, rng);
                       if (k == 0) return nullptr;
                       return &kicks.at(k);
                     });
}

RealVector filter_weights(const CoarseGrainFilter& filter, double dt) {
  if (filter.width <= 0) throw FilterError("filter width must be > 0");
  if (dt <= 0) throw FilterError("filter_weights: dt must be > 0");
  const long n0 = std::lround(filter.width / dt);
  if (n0 < 1)
    throw FilterError("filter width " + std::to_string(filter.width) +
                      " is below the sample spacing " + std::to_string(dt));
  RealVector w(n0);
  for (long r = 0; r < n0; ++r) w(r) = filter.value(double(r) * dt) * dt;
  const double sum = w.sum();
  if (std::abs(sum - 1.0) > kNormalizationSlack)
    throw FilterError("discrete filter normalization is " + std::to_string(sum) +
                      "; the grid does not resolve the window");
  w /= sum;
  return w;
}

Trajectory coarse_grain(const Trajectory& traj, const CoarseGrainFilter& filter) {
  if (filter.width < traj.schedule.period)
    throw FilterError("filter width below injection period");
  const RealVector w = filter_weights(filter, traj.dt);
  const long n0 = w.size();
  const long last = static_cast<long>(traj.states.size()) - 1;
  if (last < n0)
    throw FilterError("trajectory span " + std::to_string(last * traj.dt) +
                      " is shorter than the filter width " + std::to_string(filter.width));

  Trajectory out;
  out.space = traj.space;
  out.schedule = traj.schedule;
  out.samples_per_period = traj.samples_per_period;
  out.dt = traj.dt;
  out.kick_trace_loss = traj.kick_trace_loss;
  out.times.reserve(last - n0 + 1);
  out.states.reserve(last - n0 + 1);
  for (long g = n0; g <= last; ++g) {
    Matrix acc = w(0) * traj.states[g];
    for (long r = 1; r < n0; ++r) acc += w(r) * traj.states[g - r];
    out.times.push_back(traj.times[g]);
    out.states.push_back(std::move(acc));
  }
  return out;
}

FixedPointResult stroboscopic_fixed_point(const Superoperator& l, const Superoperator& k,
                                          double period, const Matrix& rho0,
                                          int max_periods, double tol) {
  if (period <= 0) throw Error("stroboscopic_fixed_point: period must be > 0");
  const Matrix map = propagator(l, period).matrix *
                     (Matrix::Identity(k.matrix.rows(), k.matrix.cols()) + k.matrix);
  const int d = l.space.dim();
  // Truncation clipping makes the map slightly trace-decreasing, so the raw
  // iteration has no exact fixed point; renormalizing the trace each period
  // converges to the fixed direction instead, and the per-period leak stays
  // visible through the injection diagnostics.
  Vector state = vec(rho0);
  state /= unvec(state, d).trace().real();
  FixedPointResult result;
  for (int j = 1; j <= max_periods; ++j) {
    Vector next = map * state;
    next /= unvec(next, d).trace().real();
    result.delta = trace_distance(unvec(next, d), unvec(state, d));
    result.periods = j;
    state.swap(next);
    if (result.delta < tol) {
      result.state = unvec(state, d);
      return result;
    }
  }
  throw NumericalError("stroboscopic map did not converge within " +
                       std::to_string(max_periods) + " periods (delta " +
                       std::to_string(result.delta) + ")");
}

}  // namespace maser
