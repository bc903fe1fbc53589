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

#include <functional>
#include <vector>

#include "maser/fock.hpp"

namespace maser {

/// Damped-cavity reservoir: zero-detuning Lindblad generator with photon
/// decay rate kappa and mean thermal occupation n_th.
struct CavityParams {
  double kappa = 1.0;
  double n_th = 0.0;
};

/// L = kappa (n_th + 1) D[a] + kappa n_th D[a†].
Superoperator build_cavity_liouvillian(FockSpace space, const CavityParams& params);

/// Absolute tolerance separating the exact zero mode of a cavity Liouvillian
/// from its slow decaying modes.
inline double default_kernel_tol(double kappa) { return 1e-9 * kappa; }

/// Eigenvalue decomposition of a superoperator with biorthonormal left/right
/// bases (left_vectors * right_vectors = I), certified by the reconstruction
/// residual rather than by symbolic degeneracy handling.
struct SpectralDecomposition {
  FockSpace space;
  Vector eigenvalues;                        // d^2 entries
  Matrix right_vectors;                      // columns
  Matrix left_vectors;                       // rows
  std::vector<std::vector<int>> components;  // invariant index blocks
  double condition_estimate = 1.0;
  double reconstruction_residual = 0.0;      // relative Frobenius
};

/// Connected components of the (symmetrized) nonzero pattern of s.  Both the
/// cavity Liouvillian and the Jaynes-Cummings kick maps conserve the
/// coherence offset m - n, so their matrices split into many small invariant
/// blocks; eigensolving and exponentiating per block is exact and far
/// cheaper than on the full d^2 x d^2 matrix.
std::vector<std::vector<int>> invariant_components(const Matrix& s);

/// Throws NearDefectiveError if the relative reconstruction residual
/// exceeds 1e-6.
SpectralDecomposition spectral_decompose(const Superoperator& s);

/// exp(S t) as a superoperator, scaling-and-squaring per invariant block.
Superoperator propagator(const Superoperator& s, double t);

/// e^{St} rho via the dense exponential.  t >= 0.
Matrix exp_action(const Superoperator& s, double t, const Matrix& rho);

/// e^{St} rho via the spectral decomposition (independent route).
Matrix exp_action(const SpectralDecomposition& dec, double t, const Matrix& rho);

/// exp(z) - 1 without cancellation for small |z|.
Complex expm1c(Complex z);

/// right * diag(g(lambda_i)) * left with g(lambda) = f(lambda) for
/// |lambda| > kernel_tol and g = kernel_value on the kernel.
///
/// Guard: a non-kernel eigenvalue where f is non-finite, or (for
/// kernel_value != 0) where |f| > 1e6 |kernel_value|, raises
/// PoleProximityError — this is what catches eigenvalues near the poles
/// 2 pi i n / T of the maser weight for user-supplied generators.
Superoperator lift_scalar_function(const SpectralDecomposition& dec,
                                   const std::function<Complex(Complex)>& f,
                                   Complex kernel_value, double kernel_tol);

/// Spectral projector onto the kernel (|lambda| <= kernel_tol).
Superoperator kernel_projector(const SpectralDecomposition& dec, double kernel_tol);

/// Number of eigenvalues inside the kernel band.
int kernel_dimension(const SpectralDecomposition& dec, double kernel_tol);

}  // namespace maser
