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
#include <vector>

#include "maser/micro.hpp"

namespace maser {

/// Standard maser diagnostics of a field state.
struct PhotonStatistics {
  double mean_n = 0.0;
  double variance = 0.0;
  /// variance/mean − 1; absent (not zero) when mean_n <= 1e-12.
  std::optional<double> mandel_q;
  std::vector<double> distribution;  // diagonal populations
  double top_level_population = 0.0;
  double purity = 0.0;  // Tr rho^2
};

PhotonStatistics photon_statistics(const Matrix& rho, FockSpace space);

/// ½ sum |eigenvalues(rho − sigma)|.
double trace_distance(const Matrix& rho, const Matrix& sigma);

/// Filter-weighted average of one period of a converged limit cycle,
/// treating the cycle as periodically extended; this is the micro-side
/// reference for macro steady states.
Matrix limit_cycle_average(const Trajectory& cycle, const CoarseGrainFilter& filter);

}  // namespace maser
