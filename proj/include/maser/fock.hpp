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

#include <Eigen/Dense>
#include <complex>

#include "maser/errors.hpp"

namespace maser {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Truncated Fock space spanned by |0>, ..., |n_max>.
struct FockSpace {
  int n_max = 0;
  int dim() const { return n_max + 1; }
  int dim2() const { return dim() * dim(); }
  friend bool operator==(const FockSpace& a, const FockSpace& b) {
    return a.n_max == b.n_max;
  }
};

/// d x d operator on a FockSpace.
struct Operator {
  FockSpace space;
  Matrix matrix;
};

/// Linear map on operators, stored as a d^2 x d^2 matrix.
///
/// Vectorization is column-stacking throughout the library:
/// vec(rho)(i + d*j) = rho(i, j), so vec(A rho B) = (B^T (x) A) vec(rho).
struct Superoperator {
  FockSpace space;
  Matrix matrix;

  /// Action on an operator: unvec(matrix * vec(rho)).
  Matrix apply(const Matrix& rho) const;
};

Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, int dim);

Operator annihilation(FockSpace space);
Operator creation(FockSpace space);
Operator number_operator(FockSpace space);

Superoperator zero_superoperator(FockSpace space);
Superoperator identity_superoperator(FockSpace space);

/// rho -> A rho as a superoperator.
Superoperator left_mult(const Operator& a);
/// rho -> rho A as a superoperator.
Superoperator right_mult(const Operator& a);

/// Lindblad dissipator rho -> C rho C† − ½(C†C rho + rho C†C).
Superoperator dissipator(const Operator& c);

Superoperator operator+(const Superoperator& a, const Superoperator& b);
Superoperator operator-(const Superoperator& a, const Superoperator& b);
Superoperator operator*(const Superoperator& a, const Superoperator& b);
Superoperator operator*(Complex scale, const Superoperator& s);
Superoperator operator*(double scale, const Superoperator& s);

/// Choi matrix of the map: block (i, j) holds apply(s, |i><j|).  The map is
/// completely positive iff this matrix is positive semidefinite.
Matrix choi_matrix(const Superoperator& s);

/// Hermitian, unit-trace, positive (to tolerance) state on a FockSpace.
struct DensityOperator {
  FockSpace space;
  Matrix matrix;

  /// Validates Hermiticity (1e-12 elementwise), trace (1e-12) and smallest
  /// eigenvalue (>= -1e-10); throws Error listing what failed.
  static DensityOperator from_matrix(FockSpace space, Matrix m);
};

DensityOperator fock_state(FockSpace space, int n);

/// Thermal state truncated to the space and renormalized,
/// p_n ∝ (n_th/(1+n_th))^n.
DensityOperator thermal_state(FockSpace space, double n_th);

/// Mean photon number of the truncated thermal state (closed form reference
/// for tests and oracles).
double truncated_thermal_mean(FockSpace space, double n_th);

}  // namespace maser
