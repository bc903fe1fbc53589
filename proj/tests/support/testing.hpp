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

#include <random>

#include "maser/fock.hpp"

namespace maser::test {

inline Matrix random_matrix(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) m(i, j) = Complex(u(rng), u(rng));
  return m;
}

inline Matrix random_hermitian(int d, std::mt19937_64& rng) {
  const Matrix m = random_matrix(d, rng);
  return 0.5 * (m + m.adjoint().eval());
}

inline Matrix random_density(int d, std::mt19937_64& rng) {
  const Matrix m = random_matrix(d, rng);
  Matrix rho = m * m.adjoint();
  rho /= rho.trace();
  return rho;
}

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double rel_frob(const Matrix& a, const Matrix& b) {
  const double scale = std::max(1e-300, b.norm());
  return (a - b).norm() / scale;
}

}  // namespace maser::test
