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
#include <vector>

#include "maser/injection.hpp"
#include "maser/liouvillian.hpp"

namespace maser {

/// Normalized causal averaging window, supported on [0, width].
struct CoarseGrainFilter {
  enum class Kind { rectangular, triangular, gaussian };
  Kind kind = Kind::rectangular;
  double width = 1.0;  // T0

  /// f(tau); zero outside [0, width].  The gaussian kind is centered at
  /// width/2 with sigma = width/6 and renormalized for the truncation.
  double value(double tau) const;
};

/// Uniformly sampled evolution.  Period j contributes samples at
/// t = jT + s*dt (s = 0..samples_per_period-1, dt = T/samples_per_period),
/// holding e^{L s dt}(1+K) rho_j — the kick acts at the period start on the
/// pre-kick state.  One final pre-kick sample closes the grid at
/// n_periods * T.  States are raw matrices, never renormalized.
struct Trajectory {
  FockSpace space;
  PumpSchedule schedule;
  int samples_per_period = 1;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<Matrix> states;
  /// Cumulative trace lost at kicks (the injection module's truncation
  /// clipping made visible).
  double kick_trace_loss = 0.0;
};

/// One period of the stroboscopic map: e^{LT}(1 + K) rho.
Matrix stroboscopic_step(const Matrix& rho, const Superoperator& l,
                         const Superoperator& k, double period);

Trajectory evolve_micro(const DensityOperator& rho0, const Superoperator& l,
                        const Superoperator& k, PumpSchedule schedule,
                        int n_periods, int samples_per_period);

/// Single stochastic realization: at each tick draws an atom count from the
/// table and applies (1 + M_k).  The ensemble average over seeds converges
/// to evolve_micro with K = average_kick.
Trajectory evolve_micro_stochastic(const DensityOperator& rho0, const Superoperator& l,
                                   const KickFamily& family,
                                   const InjectionStatistics& stats,
                                   PumpSchedule schedule, int n_periods,
                                   int samples_per_period, std::uint64_t seed);

/// Discrete filter weights on the trajectory grid: rectangle rule on the
/// half-open window (t - T0, t], nodes tau_r = r*dt for r = 0..n0-1 with
/// n0 = round(T0/dt), renormalized so a constant trajectory averages to
/// itself exactly.  Throws FilterError if the raw discrete normalization is
/// off by more than 1%.
RealVector filter_weights(const CoarseGrainFilter& filter, double dt);

/// rho_bar(t) = sum_r w_r rho(t - r*dt), emitted only for t >= T0; earlier
/// samples are omitted.  Throws FilterError if the trajectory is shorter
/// than T0 or the filter is narrower than the injection period.
Trajectory coarse_grain(const Trajectory& traj, const CoarseGrainFilter& filter);

/// Fixed point of rho -> e^{LT}(1+K) rho by iteration; the returned state is
/// the pre-kick period-start state of the limit cycle.
struct FixedPointResult {
  Matrix state;
  int periods = 0;
  double delta = 0.0;  // trace distance between the last two iterates
};

FixedPointResult stroboscopic_fixed_point(const Superoperator& l, const Superoperator& k,
                                          double period, const Matrix& rho0,
                                          int max_periods = 2000, double tol = 1e-10);

}  // namespace maser
