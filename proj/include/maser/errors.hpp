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

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace maser {

/// Base class of all maserlab errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix or operator does not match the Fock space it is used with.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Failures of the numerical methods themselves (CLI exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Eigendecomposition residual too large; the generator is too close to a
/// defective (non-diagonalizable) matrix for a trustworthy spectral route.
class NearDefectiveError : public NumericalError {
 public:
  explicit NearDefectiveError(double residual)
      : NumericalError("near-defective generator: reconstruction residual " +
                       std::to_string(residual)),
        residual(residual) {}
  double residual;
};

/// An eigenvalue lands close to a pole of the lifted scalar function.
class PoleProximityError : public NumericalError {
 public:
  explicit PoleProximityError(std::complex<double> lambda)
      : NumericalError("pole proximity: scalar function blows up at eigenvalue (" +
                       std::to_string(lambda.real()) + ", " +
                       std::to_string(lambda.imag()) + "i)"),
        eigenvalue(lambda) {}
  std::complex<double> eigenvalue;
};

/// The truncated pump series cannot meet the requested tail tolerance.
class SeriesNotConvergedError : public NumericalError {
 public:
  SeriesNotConvergedError(long required_l_max, double tail_bound)
      : NumericalError("series not converged: tail bound " +
                       std::to_string(tail_bound) + ", required l_max " +
                       (required_l_max < 0 ? std::string("unbounded")
                                           : std::to_string(required_l_max))),
        required_l_max(required_l_max),
        tail_bound(tail_bound) {}
  long required_l_max;
  double tail_bound;
};

/// The generator kernel is not one-dimensional.
class DegenerateSteadyStateError : public NumericalError {
 public:
  DegenerateSteadyStateError(double sigma_smallest, double sigma_second)
      : NumericalError("degenerate steady state: smallest singular values " +
                       std::to_string(sigma_smallest) + ", " +
                       std::to_string(sigma_second)),
        sigma_smallest(sigma_smallest),
        sigma_second(sigma_second) {}
  double sigma_smallest;
  double sigma_second;
};

/// Coarse-graining filter misuse (normalization, width, trajectory span).
class FilterError : public Error {
 public:
  using Error::Error;
};

/// Configuration rejected; carries the full list of violations.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error(join(violations)), violations(std::move(violations)) {}
  std::vector<std::string> violations;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid configuration";
    for (const auto& m : v) s += "\n  - " + m;
    return s;
  }
};

/// A diagnostic gate failed (CLI exit code 4).
class GateError : public Error {
 public:
  using Error::Error;
};

}  // namespace maser
