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

#include <functional>
#include <string>

#include "crib/kernels.hpp"
#include "crib/quadrature.hpp"
#include "crib/spectral.hpp"

namespace crib {

/// Retrieval direction. Backward retrieval applies the phase-matching flip
/// at rephasing; forward retrieval does not and suffers reabsorption.
enum class Direction { backward, forward };

std::string to_string(Direction d);
Direction direction_from_string(const std::string& name);

/// Storage protocol. Detunings are reversed at t = 0; the input pulse is
/// centred at -storage_time / 2.
struct ProtocolConfig {
  Direction direction = Direction::backward;
  Scalar storage_time = 30;

  void validate() const;
};

/// Convergence contract for the integral over initial detunings.
struct Delta0Settings {
  int initial_nodes = 129;
  int max_nodes = 8193;
  Scalar rel_tol = 1e-6;
  // Support half-width in units of max(initial width, pulse bandwidth).
  Scalar support_widths = 8;
};

struct SolverDiagnostics {
  int delta0_nodes = 1;
  Scalar relative_change = 0;
};

/// Input amplitude spectrum as a function of frequency.
using SpectrumFunction = std::function<Complex(Scalar)>;

/// Field inside the medium at fractional depth z in [0, 1].
ComplexSpectrum transmitted_spectrum(const MediumSpec& m,
                                     const ComplexSpectrum& in, Scalar z);

/// Retrieved field at the entrance face, backward protocol.
ComplexSpectrum backward_output_spectrum(const MediumSpec& m,
                                         const ProtocolConfig& p,
                                         const SpectrumFunction& in,
                                         const FrequencyGrid& grid,
                                         const Delta0Settings& settings = {},
                                         SolverDiagnostics* diag = nullptr);
/// Sampled-input overload. With a centred delta initial line the reflected
/// input is read off the symmetric grid exactly; otherwise it is
/// interpolated linearly.
ComplexSpectrum backward_output_spectrum(const MediumSpec& m,
                                         const ProtocolConfig& p,
                                         const ComplexSpectrum& in,
                                         const Delta0Settings& settings = {},
                                         SolverDiagnostics* diag = nullptr);

/// Retrieved field at the exit face, forward protocol.
ComplexSpectrum forward_output_spectrum(const MediumSpec& m,
                                        const ProtocolConfig& p,
                                        const SpectrumFunction& in,
                                        const FrequencyGrid& grid,
                                        const Delta0Settings& settings = {},
                                        SolverDiagnostics* diag = nullptr);
ComplexSpectrum forward_output_spectrum(const MediumSpec& m,
                                        const ProtocolConfig& p,
                                        const ComplexSpectrum& in,
                                        const Delta0Settings& settings = {},
                                        SolverDiagnostics* diag = nullptr);

/// Dispatches on p.direction.
ComplexSpectrum output_spectrum(const MediumSpec& m, const ProtocolConfig& p,
                                const SpectrumFunction& in,
                                const FrequencyGrid& grid,
                                const Delta0Settings& settings = {},
                                SolverDiagnostics* diag = nullptr);

/// Amplitude factor acquired by the retrieved pulse at time t through
/// dephasing of the initial line.
Complex storage_decay_factor(const MediumSpec& m, Scalar t);

/// Quadrature rule over the initial line (weights include the density).
QuadratureRule initial_line_rule(const SpectralDistribution& initial, int n,
                                 Scalar support_widths);

/// Default grid for a medium: covers +-max(min_half_span, 4 gamma, 4 gamma0)
/// with spacing min(max_step, gamma / 10), band edges of a box broadening
/// placed halfway between grid points.
FrequencyGrid default_grid(const MediumSpec& m, Scalar max_step = 0.02,
                           Scalar min_half_span = 20);

/// Reconstructs the retrieved pulse on [0, t_max] from its spectrum.
TimeSignal output_signal(const ComplexSpectrum& out, Scalar t_max, Scalar dt);

}  // namespace crib
