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

// Special-case reductions of the retrieval formulas. These are the
// references the general kernel path is checked against; none of them is
// used by the solver itself.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "crib/special.hpp"

namespace crib::closed_form {

/// Efficiency of backward retrieval with a flat, wide broadening.
template <typename Scalar>
Scalar backward_law(Scalar alpha_l) {
  const Scalar a = -std::expm1(-alpha_l);
  return a * a;
}

/// Efficiency of forward retrieval with a flat, wide broadening.
template <typename Scalar>
Scalar forward_law(Scalar alpha_l) {
  return alpha_l * alpha_l * std::exp(-alpha_l);
}

/// Output / reflected-input amplitude ratio, backward, flat wide broadening.
template <typename Scalar>
Scalar backward_box_factor(Scalar alpha_l) {
  return std::expm1(-alpha_l);
}

/// Output / reflected-input ratio, forward, flat wide broadening, including
/// the transit-time sinc distortion.
template <typename Scalar>
Scalar forward_box_factor(Scalar alpha_l, Scalar omega, Scalar transit) {
  return -alpha_l * std::exp(-alpha_l / 2) * sinc(omega * transit);
}

/// Lorentzian input amplitude (bandwidth Gamma) at omega.
template <typename Scalar>
Scalar lorentzian_pulse(Scalar omega, Scalar bandwidth = 1) {
  return bandwidth / (2 * std::numbers::pi_v<Scalar>) /
         (bandwidth * bandwidth / 4 + omega * omega);
}

/// Backward output, Lorentzian pulse and Lorentzian broadening of width
/// gamma, narrow initial line.
template <typename Scalar>
Scalar lorentzian_backward(Scalar nu, Scalar gamma, Scalar omega,
                           Scalar bandwidth = 1) {
  const Scalar d = gamma * gamma / 4 + omega * omega;
  return lorentzian_pulse(omega, bandwidth) * std::expm1(-nu * gamma / d);
}

/// Forward output, same configuration. The sinc argument is
/// nu omega / (gamma^2 / 4 + omega^2), the imaginary part of
/// nu (F(w) - H(-w)) / 2 for the Lorentzian kernel.
template <typename Scalar>
Scalar lorentzian_forward(Scalar nu, Scalar gamma, Scalar omega,
                          Scalar bandwidth = 1) {
  const Scalar d = gamma * gamma / 4 + omega * omega;
  return -lorentzian_pulse(omega, bandwidth) * (nu * gamma / d) *
         std::exp(-nu * gamma / (2 * d)) * sinc(nu * omega / d);
}

/// Backward output, Lorentzian pulse and box broadening of width gamma;
/// zero outside the band.
template <typename Scalar>
Scalar box_backward(Scalar nu, Scalar gamma, Scalar omega,
                    Scalar bandwidth = 1) {
  if (std::abs(omega) >= gamma / 2) return 0;
  return lorentzian_pulse(omega, bandwidth) *
         std::expm1(-2 * std::numbers::pi_v<Scalar> * nu / gamma);
}

/// Forward output, same configuration, with the slowly varying sinc of the
/// logarithmic dispersion dropped (valid for nu / gamma << 1 or omega << gamma).
template <typename Scalar>
Scalar box_forward(Scalar nu, Scalar gamma, Scalar omega,
                   Scalar bandwidth = 1) {
  if (std::abs(omega) >= gamma / 2) return 0;
  const Scalar p = std::numbers::pi_v<Scalar>;
  return -(nu / gamma) * std::exp(-p * nu / gamma) * 2 * p *
         lorentzian_pulse(omega, bandwidth);
}

}  // namespace crib::closed_form
