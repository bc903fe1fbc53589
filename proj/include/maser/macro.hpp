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

#include "maser/micro.hpp"
#include "maser/observables.hpp"

namespace maser {

enum class MacroMethod { spectral, series };

struct MacroDiagnostics {
  int kernel_dim = 0;
  long series_length = 0;      // 0 for the spectral route
  double series_tail_bound = 0.0;
  double reconstruction_residual = 0.0;
  double condition_estimate = 1.0;
};

/// Coarse-time-scale generator G = L + K L / (1 − e^{−LT}).
struct MacroGenerator {
  Superoperator generator;   // G
  Superoperator pump_part;   // K L / (1 − e^{−LT})
  MacroMethod method = MacroMethod::spectral;
  MacroDiagnostics diagnostics;
};

/// lambda / (1 − e^{−lambda T}), evaluated without cancellation near the
/// removable zero at lambda = 0 (whose limit 1/T the kernel handling
/// supplies explicitly).  Poles sit at lambda = 2 pi i n / T, n != 0.
Complex pump_eigenvalue_weight(Complex lambda, double period);

/// Spectral route: K · lift(lambda -> lambda/(1 − e^{−lambda T}), 1/T).
/// Requires Re(lambda) <= kernel_tol for every eigenvalue of L.
Superoperator pump_generator_spectral(const Superoperator& k, const Superoperator& l,
                                      double period, double kernel_tol);

/// Series route: −K sum_{l=1}^{l_max} L e^{LTl} + K (1/T) P0.  Each series
/// term annihilates the kernel of L while the scalar limit at 0 is 1/T, so
/// the projector correction is required for the routes to agree.  The
/// truncation is certified against tail_tol with the slowest nonzero decay
/// rate; failure raises SeriesNotConvergedError with the required l_max.
Superoperator pump_generator_series(const Superoperator& k, const Superoperator& l,
                                    double period, long l_max, double tail_tol,
                                    double kernel_tol,
                                    MacroDiagnostics* diagnostics = nullptr);

struct MacroOptions {
  double kernel_tol = 0.0;  // <= 0: derive as 1e-9 * spectral radius
  long l_max = 1 << 16;
  double tail_tol = 1e-10;
};

MacroGenerator build_macro_generator(const Superoperator& k, const Superoperator& l,
                                     double period, MacroMethod method,
                                     const MacroOptions& options = {});

/// e^{Gt} rho_bar.  t >= 0.
Matrix evolve_macro(const MacroGenerator& gen, const Matrix& rho_bar0, double t);

/// Trace-normalized null state of G.  The kernel must be one-dimensional
/// (checked on the singular spectrum of G); the returned state carries a
/// certified residual ||G rho|| <= 1e-10 ||G||.
DensityOperator steady_state(const MacroGenerator& gen);

/// Runs the microscopic dynamics over [0, T0] and returns the coarse-grained
/// state at t = T0 — the value from which evolve_macro should be launched.
Matrix macro_initial_state(const DensityOperator& rho0, const Superoperator& l,
                           const Superoperator& k, PumpSchedule schedule,
                           const CoarseGrainFilter& filter, int samples_per_period);

}  // namespace maser
