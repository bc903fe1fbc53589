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

#include <doctest.h>

#include <algorithm>

#include "maser/liouvillian.hpp"
#include "support/testing.hpp"

using namespace maser;

namespace {

std::vector<double> sorted_real_parts(const Vector& eigenvalues) {
  std::vector<double> re(eigenvalues.size());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) re[i] = eigenvalues(i).real();
  std::sort(re.begin(), re.end());
  return re;
}

}  // namespace

TEST_CASE("cavity Liouvillian basics") {
  SUBCASE("vacuum space cannot decay") {
    const Superoperator l = build_cavity_liouvillian({0}, {1.0, 0.0});
    CHECK(l.matrix.rows() == 1);
    CHECK(test::max_abs(l.matrix) == 0.0);
  }
  SUBCASE("two-level eigenvalues are {0, -1/2, -1/2, -1}") {
    const Superoperator l = build_cavity_liouvillian({1}, {1.0, 0.0});
    const SpectralDecomposition dec = spectral_decompose(l);
    const auto re = sorted_real_parts(dec.eigenvalues);
    CHECK(re[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(re[1] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(re[2] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(re[3] == doctest::Approx(0.0).epsilon(1e-12));
    for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i)
      CHECK(std::abs(dec.eigenvalues(i).imag()) < 1e-12);
  }
  SUBCASE("trace functional is a left null vector") {
    for (double n_th : {0.0, 0.5, 2.0}) {
      const Superoperator l = build_cavity_liouvillian({6}, {0.7, n_th});
      const Vector tau = vec(Matrix::Identity(7, 7));
      CHECK((l.matrix.adjoint() * tau).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("spectrum has no positive real parts across parameters") {
    for (int n_max : {1, 5, 12, 20})
      for (double kappa : {0.1, 1.0, 10.0})
        for (double n_th : {0.0, 0.5, 2.0}) {
          const Superoperator l = build_cavity_liouvillian({n_max}, {kappa, n_th});
          const SpectralDecomposition dec = spectral_decompose(l);
          CHECK(dec.eigenvalues.real().maxCoeff() <= 1e-10);
        }
  }
}

TEST_CASE("spectral decomposition contracts") {
  SUBCASE("zero superoperator") {
    const SpectralDecomposition dec = spectral_decompose(zero_superoperator({1}));
    CHECK(test::max_abs(dec.eigenvalues) == 0.0);
    CHECK(test::max_abs(dec.right_vectors - Matrix::Identity(4, 4)) == 0.0);
    CHECK(test::max_abs(dec.left_vectors - Matrix::Identity(4, 4)) == 0.0);
  }
  SUBCASE("diagonal superoperator reads off the diagonal") {
    Matrix d = Matrix::Zero(4, 4);
    d.diagonal() << Complex(1), Complex(2), Complex(3), Complex(4);
    const SpectralDecomposition dec = spectral_decompose({FockSpace{1}, d});
    const auto re = sorted_real_parts(dec.eigenvalues);
    CHECK(re[0] == doctest::Approx(1.0));
    CHECK(re[3] == doctest::Approx(4.0));
  }
  SUBCASE("biorthonormality and reconstruction") {
    const Superoperator l = build_cavity_liouvillian({5}, {1.0, 0.3});
    const SpectralDecomposition dec = spectral_decompose(l);
    const Eigen::Index n = dec.eigenvalues.size();
    CHECK(test::max_abs(dec.left_vectors * dec.right_vectors - Matrix::Identity(n, n)) <
          1e-8 * dec.condition_estimate);
    const Matrix recon =
        dec.right_vectors * dec.eigenvalues.asDiagonal() * dec.left_vectors;
    CHECK((recon - l.matrix).norm() / l.matrix.norm() < 1e-8 * dec.condition_estimate);
    CHECK(dec.reconstruction_residual < 1e-10);
  }
  SUBCASE("block and dense paths agree on a scrambled block matrix") {
    // Two decoupled blocks laid out on interleaved indices.
    std::mt19937_64 rng(3);
    Matrix m = Matrix::Zero(4, 4);
    const Matrix b1 = test::random_matrix(2, rng);
    m(0, 0) = b1(0, 0);
    m(0, 2) = b1(0, 1);
    m(2, 0) = b1(1, 0);
    m(2, 2) = b1(1, 1);
    m(1, 1) = Complex(0.3, -0.2);
    m(3, 3) = Complex(-1.1, 0.0);
    const SpectralDecomposition dec = spectral_decompose({FockSpace{1}, m});
    CHECK(dec.components.size() == 3);
    const Matrix recon =
        dec.right_vectors * dec.eigenvalues.asDiagonal() * dec.left_vectors;
    CHECK(test::max_abs(recon - m) < 1e-12);
  }
  SUBCASE("defective matrix is rejected") {
    Matrix jordan = Matrix::Zero(4, 4);
    jordan(0, 1) = 1.0;  // nilpotent block
    CHECK_THROWS_AS(spectral_decompose({FockSpace{1}, jordan}), NearDefectiveError);
  }
}

TEST_CASE("exp_action") {
  const FockSpace space{12};
  const Superoperator l = build_cavity_liouvillian(space, {1.0, 0.0});
  SUBCASE("t = 0 is the identity") {
    const Matrix rho = fock_state(space, 3).matrix;
    CHECK(test::max_abs(exp_action(l, 0.0, rho) - rho) < 1e-14);
  }
  SUBCASE("damped cavity mean photon number decays exponentially") {
    const Matrix rho = fock_state(space, 1).matrix;
    const Matrix out = exp_action(l, 1.0, rho);
    double mean = 0.0;
    for (int n = 0; n <= 12; ++n) mean += n * out(n, n).real();
    CHECK(mean == doctest::Approx(std::exp(-1.0)).epsilon(1e-11));
  }
  SUBCASE("thermal reservoir drives the vacuum to the truncated thermal mean") {
    const FockSpace big{20};
    const Superoperator lth = build_cavity_liouvillian(big, {1.0, 0.5});
    const Matrix out = exp_action(lth, 60.0, fock_state(big, 0).matrix);
    double mean = 0.0;
    for (int n = 0; n <= 20; ++n) mean += n * out(n, n).real();
    CHECK(mean == doctest::Approx(truncated_thermal_mean(big, 0.5)).epsilon(1e-8));
  }
  SUBCASE("scaling-and-squaring agrees with the spectral route") {
    const Superoperator lth = build_cavity_liouvillian(space, {0.8, 0.4});
    const SpectralDecomposition dec = spectral_decompose(lth);
    std::mt19937_64 rng(5);
    const Matrix rho = test::random_density(13, rng);
    for (double t : {0.05, 0.7, 3.0}) {
      const Matrix direct = exp_action(lth, t, rho);
      const Matrix spectral = exp_action(dec, t, rho);
      CHECK(test::rel_frob(direct, spectral) < 1e-9);
    }
  }
  SUBCASE("semigroup property") {
    std::mt19937_64 rng(9);
    const Matrix rho = test::random_density(13, rng);
    const Matrix once = exp_action(l, 1.1, rho);
    const Matrix twice = exp_action(l, 0.7, exp_action(l, 0.4, rho));
    CHECK(test::rel_frob(once, twice) < 1e-9);
  }
  SUBCASE("trace and Hermiticity preserved along the flow") {
    std::mt19937_64 rng(13);
    const Matrix rho = test::random_density(13, rng);
    for (double t : {0.1, 1.0, 10.0}) {
      const Matrix out = exp_action(l, t, rho);
      CHECK(std::abs(out.trace() - Complex(1.0)) < 1e-10);
      CHECK(test::max_abs(out - out.adjoint().eval()) < 1e-10);
    }
  }
  SUBCASE("complete positivity of the decay channel") {
    for (int n_max : {1, 3, 5}) {
      const Superoperator lk = build_cavity_liouvillian({n_max}, {1.0, 0.5});
      for (double t : {0.1, 1.0, 10.0}) {
        const Matrix choi = choi_matrix(propagator(lk, t));
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (choi + choi.adjoint().eval()),
                                                 Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() >= -1e-9);
      }
    }
  }
  SUBCASE("negative time is rejected") {
    CHECK_THROWS_AS(exp_action(l, -0.1, fock_state(space, 0).matrix),
                    std::invalid_argument);
  }
}

TEST_CASE("expm1c") {
  CHECK(std::abs(expm1c(Complex(0.0)) - Complex(0.0)) == 0.0);
  CHECK(std::abs(expm1c(Complex(1e-9, 0)) - Complex(1e-9 + 0.5e-18)) < 1e-24);
  CHECK(std::abs(expm1c(Complex(0.4, 0.2)) - (std::exp(Complex(0.4, 0.2)) - 1.0)) <
        1e-15);
  CHECK(std::abs(expm1c(Complex(2.0, -1.0)) - (std::exp(Complex(2.0, -1.0)) - 1.0)) <
        1e-14);
}

TEST_CASE("lift_scalar_function") {
  const FockSpace space{4};
  const Superoperator l = build_cavity_liouvillian(space, {1.0, 0.2});
  const SpectralDecomposition dec = spectral_decompose(l);
  SUBCASE("identity function reproduces the source") {
    const Superoperator lifted =
        lift_scalar_function(dec, [](Complex z) { return z; }, Complex(0.0), 1e-9);
    CHECK(test::rel_frob(lifted.matrix, l.matrix) < 1e-9);
  }
  SUBCASE("maser weight closed-form values") {
    const double t = std::log(2.0);
    auto f = [t](Complex z) { return z / (-expm1c(-z * t)); };
    CHECK(std::abs(f(Complex(-1.0)) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(f(Complex(-0.5)) - Complex((1.0 + std::sqrt(2.0)) / 2.0)) < 1e-14);
    // Removable singularity: the kernel handling substitutes 1/T.
    const Superoperator lifted =
        lift_scalar_function(dec, f, Complex(1.0 / t), default_kernel_tol(1.0));
    const Vector steady = dec.right_vectors.col([&] {
      for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i)
        if (std::abs(dec.eigenvalues(i)) <= default_kernel_tol(1.0)) return i;
      return Eigen::Index(0);
    }());
    // On the kernel vector the lift acts as 1/T.
    CHECK(test::max_abs(unvec(lifted.matrix * steady - steady / t, 5)) < 1e-9);
  }
  SUBCASE("pole proximity guard") {
    Matrix d = Matrix::Zero(4, 4);
    const double t = 0.5;
    d(0, 0) = Complex(0, 2.0 * M_PI / t);  // exactly on a pole of the weight
    d(1, 1) = Complex(-1.0);
    const SpectralDecomposition bad = spectral_decompose({FockSpace{1}, d});
    auto f = [t](Complex z) { return z / (-expm1c(-z * t)); };
    CHECK_THROWS_AS(lift_scalar_function(bad, f, Complex(1.0 / t), 1e-12),
                    PoleProximityError);
  }
  SUBCASE("kernel projector is idempotent and matches the kernel dimension") {
    const Superoperator p0 = kernel_projector(dec, default_kernel_tol(1.0));
    CHECK(test::rel_frob((p0 * p0).matrix, p0.matrix) < 1e-10);
    CHECK(kernel_dimension(dec, default_kernel_tol(1.0)) == 1);
    CHECK(std::abs(p0.matrix.trace().real() - 1.0) < 1e-9);
  }
}
