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

#include "maser/injection.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

namespace maser {

Operator jc_cos_factor(const KickModel& model) {
  const int d = model.space.dim();
  Matrix c = Matrix::Zero(d, d);
  for (int n = 0; n < d; ++n) c(n, n) = std::cos(model.theta * std::sqrt(n + 1.0));
  return {model.space, std::move(c)};
}

Operator jc_raise_factor(const KickModel& model) {
  const int d = model.space.dim();
  Matrix s = Matrix::Zero(d, d);
  // Rows run up to n_max; the transfer out of |n_max> has nowhere to go and
  // is clipped (see top_clip_rate).
  for (int n = 0; n + 1 < d; ++n) s(n + 1, n) = std::sin(model.theta * std::sqrt(n + 1.0));
  return {model.space, std::move(s)};
}

double top_clip_rate(const KickModel& model) {
  const double s = std::sin(model.theta * std::sqrt(model.space.n_max + 1.0));
  return s * s;
}

Superoperator single_atom_kick(const KickModel& model) {
  if (model.theta < 0) throw Error("single_atom_kick: theta must be >= 0");
  const Operator c = jc_cos_factor(model);
  const Operator s = jc_raise_factor(model);
  // Phi(rho) = C rho C + S rho S†; C is real diagonal.
  Matrix phi = Eigen::kroneckerProduct(c.matrix.transpose(), c.matrix).eval();
  phi += Eigen::kroneckerProduct(s.matrix.conjugate(), s.matrix).eval();
  phi -= Matrix::Identity(phi.rows(), phi.cols());
  return {model.space, std::move(phi)};
}

Superoperator multi_atom_kick(const Superoperator& m1, int k) {
  if (k < 1) throw Error("multi_atom_kick: k must be >= 1");
  const Superoperator one = identity_superoperator(m1.space);
  Superoperator channel = one + m1;
  Superoperator acc = channel;
  for (int i = 1; i < k; ++i) acc = channel * acc;
  return acc - one;
}

KickFamily jc_kick_family(const KickModel& model, int k_max) {
  KickFamily family{model.space, {}};
  if (k_max < 1) return family;
  const Superoperator m1 = single_atom_kick(model);
  const Superoperator one = identity_superoperator(model.space);
  Superoperator channel = one + m1;
  Superoperator acc = channel;
  family.kicks.emplace(1, m1);
  for (int k = 2; k <= k_max; ++k) {
    acc = channel * acc;
    family.kicks.emplace(k, acc - one);
  }
  return family;
}

InjectionStatistics InjectionStatistics::from_table(std::vector<double> p) {
  if (p.empty()) throw Error("injection statistics: empty table");
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0 || v > 1.0)
      throw Error("injection statistics: probability " + std::to_string(v) +
                  " outside [0, 1]");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw Error("injection statistics: probabilities sum to " + std::to_string(sum));
  return {std::move(p)};
}

double InjectionStatistics::mean_atoms() const {
  double m = 0.0;
  for (size_t k = 0; k < probabilities.size(); ++k) m += double(k) * probabilities[k];
  return m;
}

Superoperator average_kick(const InjectionStatistics& stats, const KickFamily& family) {
  Superoperator k_op = zero_superoperator(family.space);
  for (size_t k = 1; k < stats.probabilities.size(); ++k) {
    const double p = stats.probabilities[k];
    if (p == 0.0) continue;
    auto it = family.kicks.find(static_cast<int>(k));
    if (it == family.kicks.end())
      throw Error("average_kick: no kick operator for k = " + std::to_string(k) +
                  " with p_k = " + std::to_string(p));
    k_op = k_op + p * it->second;
  }
  return k_op;
}

int sample_event(const InjectionStatistics& stats, std::mt19937_64& rng) {
  const double u = double(rng() >> 11) * 0x1.0p-53;
  double cum = 0.0;
  const int kmax = stats.k_max();
  for (int k = 0; k <= kmax; ++k) {
    cum += stats.probabilities[k];
    if (u < cum) return k;
  }
  return kmax;
}

}  // namespace maser
