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

#include <cmath>
#include <complex>

namespace crib {

/// sin(x)/x with the removable singularity filled in.
template <typename Scalar>
Scalar sinc(Scalar x) {
  using std::abs;
  if (abs(x) < Scalar(1e-4)) {
    const Scalar x2 = x * x;
    return Scalar(1) - x2 / Scalar(6) + x2 * x2 / Scalar(120);
  }
  return std::sin(x) / x;
}

/// sinh(x)/x on the complex plane; series below |x| = 1e-4 (truncation error
/// below 1e-27).
template <typename Scalar>
std::complex<Scalar> sinhc(std::complex<Scalar> x) {
  if (std::abs(x) < Scalar(1e-4)) {
    const std::complex<Scalar> x2 = x * x;
    return Scalar(1) + x2 / Scalar(6) + x2 * x2 / Scalar(120);
  }
  return std::sinh(x) / x;
}

/// (1 - exp(-x)) / x, continuous through x = 0.
template <typename Scalar>
std::complex<Scalar> one_minus_exp_ratio(std::complex<Scalar> x) {
  if (std::abs(x) < Scalar(1e-3)) {
    return Scalar(1) -
           x * (Scalar(1) / Scalar(2) -
                x * (Scalar(1) / Scalar(6) -
                     x * (Scalar(1) / Scalar(24) - x / Scalar(120))));
  }
  return (Scalar(1) - std::exp(-x)) / x;
}

/// phi_1(x) = (exp(x) - 1) / x.
template <typename Scalar>
std::complex<Scalar> phi1(std::complex<Scalar> x) {
  if (std::abs(x) < Scalar(1e-3)) {
    return Scalar(1) +
           x * (Scalar(1) / Scalar(2) +
                x * (Scalar(1) / Scalar(6) +
                     x * (Scalar(1) / Scalar(24) + x / Scalar(120))));
  }
  return (std::exp(x) - Scalar(1)) / x;
}

/// phi_2(x) = (exp(x) - 1 - x) / x^2.
template <typename Scalar>
std::complex<Scalar> phi2(std::complex<Scalar> x) {
  if (std::abs(x) < Scalar(1e-2)) {
    return Scalar(1) / Scalar(2) +
           x * (Scalar(1) / Scalar(6) +
                x * (Scalar(1) / Scalar(24) +
                     x * (Scalar(1) / Scalar(120) + x / Scalar(720))));
  }
  return (std::exp(x) - Scalar(1) - x) / (x * x);
}

}  // namespace crib
