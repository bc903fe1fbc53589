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

#include "maser/observables.hpp"

#include <cmath>

namespace maser {

PhotonStatistics photon_statistics(const Matrix& rho, FockSpace space) {
  if (rho.rows() != space.dim() || rho.cols() != space.dim())
    throw DimensionError("photon_statistics: state does not match space");
  PhotonStatistics stats;
  const int d = space.dim();
  stats.distribution.resize(d);
  double m1 = 0.0, m2 = 0.0;
  for (int n = 0; n < d; ++n) {
    const double p = rho(n, n).real();
    stats.distribution[n] = p;
    m1 += n * p;
    m2 += double(n) * n * p;
  }
  stats.mean_n = m1;
  stats.variance = m2 - m1 * m1;
  if (m1 > 1e-12) stats.mandel_q = stats.variance / m1 - 1.0;
  stats.top_level_population = stats.distribution[d - 1];
  stats.purity = (rho * rho).trace().real();
  return stats;
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw DimensionError("trace_distance: dimensions differ");
  const Matrix diff = 0.5 * ((rho - sigma) + (rho - sigma).adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Matrix limit_cycle_average(const Trajectory& cycle, const CoarseGrainFilter& filter) {
  const long per_period = cycle.samples_per_period;
  // Accept the period with or without the closing pre-kick sample; the
  // periodic extension uses the post-kick boundary convention either way.
  if (static_cast<long>(cycle.states.size()) != per_period &&
      static_cast<long>(cycle.states.size()) != per_period + 1)
    throw Error("limit_cycle_average: trajectory does not cover exactly one period");
  const RealVector w = filter_weights(filter, cycle.dt);
  Matrix acc = Matrix::Zero(cycle.space.dim(), cycle.space.dim());
  for (long r = 0; r < w.size(); ++r) {
    const long idx = ((-r) % per_period + per_period) % per_period;
    acc += w(r) * cycle.states[idx];
  }
  return acc;
}

}  // namespace maser
