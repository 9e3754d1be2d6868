// Copyright (c) 2026 The crib-memory Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0.txt
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace crib {

// All frequencies are in units of the pulse bandwidth, times in units of its
// inverse.
using Scalar = double;
using Complex = std::complex<Scalar>;
using Index = Eigen::Index;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Scalar pi = std::numbers::pi_v<Scalar>;
inline constexpr Complex I{0.0, 1.0};

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or violated precondition on input parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Point evaluation requested for a distribution that only exists under an
/// integral (the delta line).
class UnsupportedEvaluation : public Error {
 public:
  using Error::Error;
};

/// Kernel evaluated exactly on a logarithmic singularity (box band edge).
class SingularPoint : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Scalar achieved)
      : Error(what), achieved_(achieved) {}
  Scalar achieved() const noexcept { return achieved_; }

 private:
  Scalar achieved_;
};

/// Metric undefined for the given data (zero energy, nonpositive samples).
class MetricError : public Error {
 public:
  using Error::Error;
};

/// Operation applied to a coherence field in the wrong state.
class StateError : public Error {
 public:
  using Error::Error;
};

}  // namespace crib
