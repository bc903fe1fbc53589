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

#include "maser/liouvillian.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numeric>

namespace maser {

namespace {

constexpr double kDefectiveResidual = 1e-6;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(int i, int j) { parent[find(i)] = find(j); }
};

}  // namespace

Superoperator build_cavity_liouvillian(FockSpace space, const CavityParams& params) {
  if (params.kappa < 0) throw Error("cavity: kappa must be >= 0");
  if (params.n_th < 0) throw Error("cavity: n_th must be >= 0");
  Superoperator l = (params.kappa * (params.n_th + 1.0)) * dissipator(annihilation(space));
  if (params.n_th > 0)
    l = l + (params.kappa * params.n_th) * dissipator(creation(space));
  return l;
}

std::vector<std::vector<int>> invariant_components(const Matrix& s) {
  const int n = static_cast<int>(s.rows());
  UnionFind uf(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (i != j && s(i, j) != Complex(0.0)) uf.unite(i, j);
  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i) groups[uf.find(i)].push_back(i);
  std::vector<std::vector<int>> components;
  for (auto& g : groups)
    if (!g.empty()) components.push_back(std::move(g));
  return components;  // ordered by smallest member, members ascending
}

SpectralDecomposition spectral_decompose(const Superoperator& s) {
  const int n = static_cast<int>(s.matrix.rows());
  SpectralDecomposition dec;
  dec.space = s.space;
  dec.eigenvalues.resize(n);
  dec.right_vectors = Matrix::Zero(n, n);
  dec.left_vectors = Matrix::Zero(n, n);
  dec.components = invariant_components(s.matrix);

  Matrix residual = s.matrix;
  int pos = 0;
  for (const auto& comp : dec.components) {
    const int k = static_cast<int>(comp.size());
    if (k == 1) {
      const int i = comp[0];
      dec.eigenvalues(pos) = s.matrix(i, i);
      dec.right_vectors(i, pos) = 1.0;
      dec.left_vectors(pos, i) = 1.0;
      residual(i, i) = 0.0;
      ++pos;
      continue;
    }
    Matrix block(k, k);
    for (int c = 0; c < k; ++c)
      for (int r = 0; r < k; ++r) block(r, c) = s.matrix(comp[r], comp[c]);
    Eigen::ComplexEigenSolver<Matrix> es(block);
    if (es.info() != Eigen::Success)
      throw NearDefectiveError(std::numeric_limits<double>::infinity());
    const Matrix v = es.eigenvectors();
    const Matrix vinv = v.partialPivLu().inverse();
    const Matrix recon = v * es.eigenvalues().asDiagonal() * vinv;
    for (int c = 0; c < k; ++c) {
      dec.eigenvalues(pos + c) = es.eigenvalues()(c);
      for (int r = 0; r < k; ++r) {
        dec.right_vectors(comp[r], pos + c) = v(r, c);
        dec.left_vectors(pos + c, comp[r]) = vinv(c, r);
        residual(comp[r], comp[c]) -= recon(r, c);
      }
    }
    pos += k;
  }

  const double scale = s.matrix.norm();
  dec.reconstruction_residual = scale > 0 ? residual.norm() / scale : residual.norm();
  dec.condition_estimate =
      std::max(1.0, dec.right_vectors.norm() * dec.left_vectors.norm() / std::sqrt(double(n)));
  if (dec.reconstruction_residual > kDefectiveResidual)
    throw NearDefectiveError(dec.reconstruction_residual);
  return dec;
}

Superoperator propagator(const Superoperator& s, double t) {
  if (t < 0) throw std::invalid_argument("propagator: t must be >= 0");
  const int n = static_cast<int>(s.matrix.rows());
  Matrix e = Matrix::Zero(n, n);
  for (const auto& comp : invariant_components(s.matrix)) {
    const int k = static_cast<int>(comp.size());
    if (k == 1) {
      e(comp[0], comp[0]) = std::exp(t * s.matrix(comp[0], comp[0]));
      continue;
    }
    Matrix block(k, k);
    for (int c = 0; c < k; ++c)
      for (int r = 0; r < k; ++r) block(r, c) = t * s.matrix(comp[r], comp[c]);
    const Matrix eb = block.exp();
    for (int c = 0; c < k; ++c)
      for (int r = 0; r < k; ++r) e(comp[r], comp[c]) = eb(r, c);
  }
  return {s.space, std::move(e)};
}

Matrix exp_action(const Superoperator& s, double t, const Matrix& rho) {
  return propagator(s, t).apply(rho);
}

Matrix exp_action(const SpectralDecomposition& dec, double t, const Matrix& rho) {
  if (t < 0) throw std::invalid_argument("exp_action: t must be >= 0");
  Vector coeffs = dec.left_vectors * vec(rho);
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    coeffs(i) *= std::exp(t * dec.eigenvalues(i));
  return unvec(dec.right_vectors * coeffs, dec.space.dim());
}

Complex expm1c(Complex z) {
  if (std::abs(z) > 0.5) return std::exp(z) - 1.0;
  // Horner form of z (1 + z/2 (1 + z/3 (...)))
  Complex acc = 0.0;
  for (int k = 24; k >= 2; --k) acc = z / double(k) * (1.0 + acc);
  return z * (1.0 + acc);
}

namespace {

Superoperator assemble_lift(const SpectralDecomposition& dec, const Vector& weights) {
  const int n = static_cast<int>(dec.eigenvalues.size());
  Matrix out = Matrix::Zero(n, n);
  // Column positions follow the component layout used by spectral_decompose.
  int pos = 0;
  for (const auto& comp : dec.components) {
    const int k = static_cast<int>(comp.size());
    Matrix right(k, k), left(k, k);
    for (int c = 0; c < k; ++c)
      for (int r = 0; r < k; ++r) {
        right(r, c) = dec.right_vectors(comp[r], pos + c);
        left(c, r) = dec.left_vectors(pos + c, comp[r]);
      }
    const Matrix block = right * weights.segment(pos, k).asDiagonal() * left;
    for (int c = 0; c < k; ++c)
      for (int r = 0; r < k; ++r) out(comp[r], comp[c]) = block(r, c);
    pos += k;
  }
  return {dec.space, std::move(out)};
}

}  // namespace

Superoperator lift_scalar_function(const SpectralDecomposition& dec,
                                   const std::function<Complex(Complex)>& f,
                                   Complex kernel_value, double kernel_tol) {
  const int n = static_cast<int>(dec.eigenvalues.size());
  Vector weights(n);
  const double guard = 1e6 * std::abs(kernel_value);
  for (int i = 0; i < n; ++i) {
    const Complex lambda = dec.eigenvalues(i);
    if (std::abs(lambda) <= kernel_tol) {
      weights(i) = kernel_value;
      continue;
    }
    const Complex g = f(lambda);
    if (!std::isfinite(g.real()) || !std::isfinite(g.imag()))
      throw PoleProximityError(lambda);
    if (guard > 0 && std::abs(g) > guard) throw PoleProximityError(lambda);
    weights(i) = g;
  }
  return assemble_lift(dec, weights);
}

Superoperator kernel_projector(const SpectralDecomposition& dec, double kernel_tol) {
  const int n = static_cast<int>(dec.eigenvalues.size());
  Vector weights(n);
  for (int i = 0; i < n; ++i)
    weights(i) = std::abs(dec.eigenvalues(i)) <= kernel_tol ? 1.0 : 0.0;
  return assemble_lift(dec, weights);
}

int kernel_dimension(const SpectralDecomposition& dec, double kernel_tol) {
  int k = 0;
  for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i)
    if (std::abs(dec.eigenvalues(i)) <= kernel_tol) ++k;
  return k;
}

}  // namespace maser
