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

#include "maser/macro.hpp"

#include <cmath>
#include <limits>

namespace maser {

namespace {

double derive_kernel_tol(const SpectralDecomposition& dec, double requested) {
  if (requested > 0) return requested;
  const double radius = dec.eigenvalues.cwiseAbs().maxCoeff();
  return 1e-9 * radius;
}

void check_decaying_spectrum(const SpectralDecomposition& dec, double kernel_tol) {
  for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i)
    if (dec.eigenvalues(i).real() > kernel_tol)
      throw NumericalError("pump generator: eigenvalue with positive real part " +
                           std::to_string(dec.eigenvalues(i).real()));
}

/// sum_{l=1}^{n} E^l by binary splitting, per invariant block of E.
Matrix geometric_sum(const Matrix& e, long n) {
  struct SumAndPower {
    Matrix sum;    // sum_{l=1}^{n} B^l
    Matrix power;  // B^n
  };
  // Recursion: for n = 2m, S_{2m} = S_m + B^m S_m; an odd tail adds B^n.
  std::function<SumAndPower(const Matrix&, long)> go =
      [&go](const Matrix& b, long m) -> SumAndPower {
    if (m == 1) return {b, b};
    SumAndPower half = go(b, m / 2);
    Matrix power = half.power * half.power;
    Matrix sum = half.sum + half.power * half.sum;
    if (m % 2 == 1) {
      power = power * b;
      sum += power;
    }
    return {std::move(sum), std::move(power)};
  };

  Matrix out = Matrix::Zero(e.rows(), e.cols());
  for (const auto& comp : invariant_components(e)) {
    const int k = static_cast<int>(comp.size());
    if (k == 1) {
      const Complex x = e(comp[0], comp[0]);
      SumAndPower acc = go(Matrix::Constant(1, 1, x), n);
      out(comp[0], comp[0]) = acc.sum(0, 0);
      continue;
    }
    Matrix block(k, k);
    for (int c = 0; c < k; ++c)
      for (int r = 0; r < k; ++r) block(r, c) = e(comp[r], comp[c]);
    const Matrix sum = go(block, n).sum;
    for (int c = 0; c < k; ++c)
      for (int r = 0; r < k; ++r) out(comp[r], comp[c]) = sum(r, c);
  }
  return out;
}

}  // namespace

Complex pump_eigenvalue_weight(Complex lambda, double period) {
  return lambda / (-expm1c(-lambda * period));
}

Superoperator pump_generator_spectral(const Superoperator& k, const Superoperator& l,
                                      double period, double kernel_tol) {
  if (period <= 0) throw Error("pump_generator_spectral: period must be > 0");
  const SpectralDecomposition dec = spectral_decompose(l);
  const double tol = derive_kernel_tol(dec, kernel_tol);
  check_decaying_spectrum(dec, tol);
  const Superoperator lift = lift_scalar_function(
      dec, [period](Complex z) { return pump_eigenvalue_weight(z, period); },
      Complex(1.0 / period), tol);
  return k * lift;
}

Superoperator pump_generator_series(const Superoperator& k, const Superoperator& l,
                                    double period, long l_max, double tail_tol,
                                    double kernel_tol, MacroDiagnostics* diagnostics) {
  if (period <= 0) throw Error("pump_generator_series: period must be > 0");
  if (l_max < 1) throw Error("pump_generator_series: l_max must be >= 1");
  const SpectralDecomposition dec = spectral_decompose(l);
  const double tol = derive_kernel_tol(dec, kernel_tol);
  check_decaying_spectrum(dec, tol);

  // Slowest nonzero decay rate governs the truncation error.
  double slowest = -std::numeric_limits<double>::infinity();
  bool has_nonkernel = false;
  for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i) {
    if (std::abs(dec.eigenvalues(i)) <= tol) continue;
    has_nonkernel = true;
    slowest = std::max(slowest, dec.eigenvalues(i).real());
  }

  const double k_norm = k.matrix.norm();
  double tail_bound = 0.0;
  if (has_nonkernel && k_norm > 0) {
    if (slowest >= 0)
      throw SeriesNotConvergedError(-1, std::numeric_limits<double>::infinity());
    const double rate = -slowest;
    const double denom = -std::expm1(-rate * period);
    tail_bound = k_norm * rate * std::exp(-rate * period * double(l_max + 1)) / denom;
    if (tail_bound > tail_tol) {
      const double needed =
          std::log(tail_tol * denom / (k_norm * rate)) / (-rate * period);
      throw SeriesNotConvergedError(static_cast<long>(std::ceil(needed)) - 1, tail_bound);
    }
  }

  const Superoperator p0 = kernel_projector(dec, tol);
  const Matrix e = propagator(l, period).matrix;
  const Matrix partial_sums = geometric_sum(e, l_max);
  Matrix pump = -k.matrix * (l.matrix * partial_sums);
  pump += (1.0 / period) * (k.matrix * p0.matrix);

  if (diagnostics) {
    diagnostics->kernel_dim = kernel_dimension(dec, tol);
    diagnostics->series_length = l_max;
    diagnostics->series_tail_bound = tail_bound;
    diagnostics->reconstruction_residual = dec.reconstruction_residual;
    diagnostics->condition_estimate = dec.condition_estimate;
  }
  return {l.space, std::move(pump)};
}

MacroGenerator build_macro_generator(const Superoperator& k, const Superoperator& l,
                                     double period, MacroMethod method,
                                     const MacroOptions& options) {
  MacroGenerator gen;
  gen.method = method;
  if (method == MacroMethod::spectral) {
    const SpectralDecomposition dec = spectral_decompose(l);
    const double tol = derive_kernel_tol(dec, options.kernel_tol);
    check_decaying_spectrum(dec, tol);
    gen.pump_part = k * lift_scalar_function(
                            dec,
                            [period](Complex z) { return pump_eigenvalue_weight(z, period); },
                            Complex(1.0 / period), tol);
    gen.diagnostics.kernel_dim = kernel_dimension(dec, tol);
    gen.diagnostics.reconstruction_residual = dec.reconstruction_residual;
    gen.diagnostics.condition_estimate = dec.condition_estimate;
  } else {
    gen.pump_part = pump_generator_series(k, l, period, options.l_max, options.tail_tol,
                                          options.kernel_tol, &gen.diagnostics);
  }
  gen.generator = l + gen.pump_part;
  return gen;
}

Matrix evolve_macro(const MacroGenerator& gen, const Matrix& rho_bar0, double t) {
  if (t < 0) throw std::invalid_argument("evolve_macro: t must be >= 0");
  return exp_action(gen.generator, t, rho_bar0);
}

DensityOperator steady_state(const MacroGenerator& gen) {
  const Matrix& g = gen.generator.matrix;
  const Eigen::Index n = g.rows();
  const Matrix gram = g.adjoint() * g;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (gram + gram.adjoint().eval()));
  RealVector sigma = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();  // ascending
  const double sigma_max = sigma(n - 1);
  if (sigma_max == 0.0) throw DegenerateSteadyStateError(0.0, 0.0);

  int kernel_dim = 0;
  while (kernel_dim < n && sigma(kernel_dim) <= 1e-6 * sigma_max) ++kernel_dim;
  if (kernel_dim != 1)
    throw DegenerateSteadyStateError(sigma(0), n > 1 ? sigma(1) : sigma(0));

  // Inverse iteration sharpens the Gram-matrix kernel vector well past the
  // sqrt(eps) floor of the squared problem.
  Vector v = es.eigenvectors().col(0);
  Matrix shifted = g;
  shifted.diagonal().array() += 1e-14 * sigma_max;
  const Eigen::PartialPivLU<Matrix> lu(shifted);
  for (int iter = 0; iter < 2; ++iter) {
    v = lu.solve(v);
    v.normalize();
  }

  const int d = gen.generator.space.dim();
  Matrix rho = unvec(v, d);
  rho = 0.5 * (rho + rho.adjoint().eval());
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-8)
    throw NumericalError("steady state: null vector has vanishing trace");
  rho /= tr;

  const double residual = (g * vec(rho)).norm() / (g.norm() * vec(rho).norm());
  if (residual > 1e-10)
    throw NumericalError("steady state: kernel residual " + std::to_string(residual) +
                         " exceeds 1e-10");
  return DensityOperator::from_matrix(gen.generator.space, std::move(rho));
}

Matrix macro_initial_state(const DensityOperator& rho0, const Superoperator& l,
                           const Superoperator& k, PumpSchedule schedule,
                           const CoarseGrainFilter& filter, int samples_per_period) {
  if (filter.width < schedule.period)
    throw FilterError("filter width below injection period");
  const double dt = schedule.period / samples_per_period;
  const long n0 = std::lround(filter.width / dt);
  const int n_periods =
      static_cast<int>((n0 + samples_per_period - 1) / samples_per_period);
  const Trajectory traj =
      evolve_micro(rho0, l, k, schedule, n_periods, samples_per_period);
  return coarse_grain(traj, filter).states.front();
}

}  // namespace maser
