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

#include "maser/fock.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <string>

namespace maser {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kEigenvalueFloor = -1e-10;

void check_space(const FockSpace& space, const Matrix& m, const char* what) {
  if (m.rows() != space.dim() || m.cols() != space.dim())
    throw DimensionError(std::string(what) + ": matrix is " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         ", space dimension is " + std::to_string(space.dim()));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

}  // namespace

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim)
    throw DimensionError("unvec: vector length " + std::to_string(v.size()) +
                         " is not " + std::to_string(dim) + "^2");
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Matrix Superoperator::apply(const Matrix& rho) const {
  check_space(space, rho, "Superoperator::apply");
  return unvec(matrix * vec(rho), space.dim());
}

Operator annihilation(FockSpace space) {
  const int d = space.dim();
  Matrix a = Matrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
  return {space, std::move(a)};
}

Operator creation(FockSpace space) {
  Operator a = annihilation(space);
  return {space, a.matrix.adjoint()};
}

Operator number_operator(FockSpace space) {
  const int d = space.dim();
  Matrix n = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) n(k, k) = double(k);
  return {space, std::move(n)};
}

Superoperator zero_superoperator(FockSpace space) {
  return {space, Matrix::Zero(space.dim2(), space.dim2())};
}

Superoperator identity_superoperator(FockSpace space) {
  return {space, Matrix::Identity(space.dim2(), space.dim2())};
}

Superoperator left_mult(const Operator& a) {
  check_space(a.space, a.matrix, "left_mult");
  const int d = a.space.dim();
  return {a.space, kron(Matrix::Identity(d, d), a.matrix)};
}

Superoperator right_mult(const Operator& a) {
  check_space(a.space, a.matrix, "right_mult");
  const int d = a.space.dim();
  return {a.space, kron(a.matrix.transpose(), Matrix::Identity(d, d))};
}

Superoperator dissipator(const Operator& c) {
  check_space(c.space, c.matrix, "dissipator");
  const int d = c.space.dim();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix cdc = c.matrix.adjoint() * c.matrix;
  Matrix s = kron(c.matrix.conjugate(), c.matrix);
  s -= 0.5 * kron(id, cdc);
  s -= 0.5 * kron(cdc.transpose(), id);
  return {c.space, std::move(s)};
}

namespace {

Superoperator combine(const Superoperator& a, const Superoperator& b,
                      const char* what, int sign) {
  if (!(a.space == b.space))
    throw DimensionError(std::string(what) + ": superoperators live on different spaces");
  return {a.space, sign > 0 ? (a.matrix + b.matrix).eval() : (a.matrix - b.matrix).eval()};
}

}  // namespace

Superoperator operator+(const Superoperator& a, const Superoperator& b) {
  return combine(a, b, "operator+", +1);
}

Superoperator operator-(const Superoperator& a, const Superoperator& b) {
  return combine(a, b, "operator-", -1);
}

Superoperator operator*(const Superoperator& a, const Superoperator& b) {
  if (!(a.space == b.space))
    throw DimensionError("operator*: superoperators live on different spaces");
  return {a.space, a.matrix * b.matrix};
}

Superoperator operator*(Complex scale, const Superoperator& s) {
  return {s.space, scale * s.matrix};
}

Superoperator operator*(double scale, const Superoperator& s) {
  return {s.space, scale * s.matrix};
}

Matrix choi_matrix(const Superoperator& s) {
  const int d = s.space.dim();
  Matrix choi(d * d, d * d);
  Matrix basis = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      basis(i, j) = 1.0;
      choi.block(i * d, j * d, d, d) = s.apply(basis);
      basis(i, j) = 0.0;
    }
  }
  return choi;
}

DensityOperator DensityOperator::from_matrix(FockSpace space, Matrix m) {
  check_space(space, m, "DensityOperator");
  std::vector<std::string> problems;
  const double herm = (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol)
    problems.push_back("not Hermitian: max deviation " + std::to_string(herm));
  const double tr_err = std::abs(m.trace() - Complex(1.0));
  if (tr_err > kTraceTol)
    problems.push_back("trace differs from 1 by " + std::to_string(tr_err));
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint().eval()),
                                           Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < kEigenvalueFloor)
    problems.push_back("negative eigenvalue " + std::to_string(min_eig));
  if (!problems.empty()) {
    std::string msg = "invalid density operator";
    for (const auto& p : problems) msg += "; " + p;
    throw Error(msg);
  }
  return {space, std::move(m)};
}

DensityOperator fock_state(FockSpace space, int n) {
  if (n < 0 || n > space.n_max)
    throw DimensionError("fock_state: level " + std::to_string(n) +
                         " outside truncated space (n_max " +
                         std::to_string(space.n_max) + ")");
  Matrix m = Matrix::Zero(space.dim(), space.dim());
  m(n, n) = 1.0;
  return {space, std::move(m)};
}

DensityOperator thermal_state(FockSpace space, double n_th) {
  if (n_th < 0) throw Error("thermal_state: n_th must be >= 0");
  const int d = space.dim();
  Matrix m = Matrix::Zero(d, d);
  if (n_th == 0.0) {
    m(0, 0) = 1.0;
    return {space, std::move(m)};
  }
  const double q = n_th / (1.0 + n_th);
  double w = 1.0, sum = 0.0;
  for (int n = 0; n < d; ++n, w *= q) {
    m(n, n) = w;
    sum += w;
  }
  m /= sum;
  return {space, std::move(m)};
}

double truncated_thermal_mean(FockSpace space, double n_th) {
  if (n_th == 0.0) return 0.0;
  const double q = n_th / (1.0 + n_th);
  double w = 1.0, sum = 0.0, acc = 0.0;
  for (int n = 0; n <= space.n_max; ++n, w *= q) {
    sum += w;
    acc += n * w;
  }
  return acc / sum;
}

}  // namespace maser
