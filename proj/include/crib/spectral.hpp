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
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "crib/common.hpp"

namespace crib {

enum class Shape { delta, lorentzian, box, tabulated };

std::string to_string(Shape shape);
Shape shape_from_string(const std::string& name);

/// Normalized spectral density of atomic detunings.
///
/// Lorentzian widths are full widths at half maximum, box widths are the
/// length of the flat interval. Tabulated densities are interpolated
/// linearly between samples and renormalized to unit area on construction.
class SpectralDistribution {
 public:
  SpectralDistribution() = default;

  static SpectralDistribution delta(Scalar center = 0);
  static SpectralDistribution lorentzian(Scalar width, Scalar center = 0);
  static SpectralDistribution box(Scalar width, Scalar center = 0);
  static SpectralDistribution tabulated(std::vector<Scalar> detuning,
                                        std::vector<Scalar> density);
  /// Dispatches on `shape`; `width` is ignored for delta.
  static SpectralDistribution make(Shape shape, Scalar width,
                                   Scalar center = 0);

  Shape shape() const { return shape_; }
  Scalar width() const { return width_; }
  Scalar center() const { return center_; }
  const RealVector& table_detuning() const { return table_x_; }
  const RealVector& table_density() const { return table_y_; }

  /// Mirror image G(-x).
  SpectralDistribution reflected() const;
  bool is_symmetric() const;

  /// Closed interval outside of which the density vanishes; infinite for
  /// the Lorentzian.
  std::pair<Scalar, Scalar> support() const;

 private:
  Shape shape_ = Shape::delta;
  Scalar width_ = 0;
  Scalar center_ = 0;
  RealVector table_x_;
  RealVector table_y_;
};

/// G(detuning). Throws UnsupportedEvaluation for the delta line.
Scalar eval_density(const SpectralDistribution& d, Scalar detuning);

/// Integral of G(x) exp(-2 i x t) dx.
Complex distribution_fourier(const SpectralDistribution& d, Scalar t);

/// Density of the sum of two independent detunings, (a * b)(x). Closed form
/// for Lorentzian pairs and delta factors, adaptive quadrature otherwise.
Scalar convolved_density(const SpectralDistribution& a,
                         const SpectralDistribution& b, Scalar detuning);

/// Symmetric uniform frequency grid with an odd number of points, so that
/// omega -> -omega maps grid points onto grid points.
class FrequencyGrid {
 public:
  FrequencyGrid() = default;
  static FrequencyGrid symmetric(Scalar half_span, Index n_points);

  /// Grid covering at least [-half_span, half_span] with spacing at most
  /// max_step. When band_edge > 0 the spacing is shrunk so that +-band_edge
  /// falls halfway between two grid points.
  static FrequencyGrid covering(Scalar half_span, Scalar max_step,
                                Scalar band_edge = 0);

  Scalar half_span() const { return half_span_; }
  Index size() const { return n_; }
  Scalar step() const { return n_ > 1 ? 2 * half_span_ / (n_ - 1) : 0; }
  Scalar omega(Index i) const { return -half_span_ + i * step(); }
  Index mirror(Index i) const { return n_ - 1 - i; }
  RealVector omegas() const;

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

 private:
  Scalar half_span_ = 0;
  Index n_ = 0;
};

/// Complex field amplitudes sampled on a frequency grid.
struct ComplexSpectrum {
  FrequencyGrid grid;
  ComplexVector values;

  /// Linear interpolation; zero outside the grid.
  Complex at(Scalar omega) const;
  /// Spectrum evaluated at -omega on the same grid.
  ComplexSpectrum reflected() const;
};

/// Uniformly sampled complex envelope.
struct TimeSignal {
  Scalar t_min = 0;
  Scalar dt = 1;
  ComplexVector values;

  Index size() const { return values.size(); }
  Scalar t(Index i) const { return t_min + i * dt; }
  Scalar t_max() const { return t(size() - 1); }
  /// Time-reversed copy, E(-t).
  TimeSignal reversed() const;
};

/// Integral of |E(t)|^2 dt (trapezoid).
Scalar energy(const TimeSignal& s);
/// Integral of |E(t)|^2 dt restricted to t > t0.
Scalar energy_after(const TimeSignal& s, Scalar t0);
/// (1 / 2 pi) integral of |E(omega)|^2 d omega (trapezoid).
Scalar spectral_energy(const ComplexSpectrum& s);

/// E(omega) = integral dt exp(i omega t) E(t), trapezoid on the samples.
ComplexSpectrum fourier_transform(const TimeSignal& s,
                                  const FrequencyGrid& grid);
/// E(t) = (1 / 2 pi) integral d omega exp(-i omega t) E(omega), sampled on
/// t_min + k dt.
TimeSignal inverse_fourier_transform(const ComplexSpectrum& s, Scalar t_min,
                                     Scalar dt, Index n_samples);

enum class PulseShape { lorentzian, tabulated };

/// Input pulse. The Lorentzian amplitude spectrum is
/// (bandwidth / 2 pi) / (bandwidth^2 / 4 + omega^2), shifted so that the
/// pulse is centred on center_time.
struct PulseSpec {
  PulseShape shape = PulseShape::lorentzian;
  Scalar bandwidth = 1;
  Scalar center_time = 0;
  // Tabulated real amplitude spectrum (omega, amplitude), before the
  // center_time phase.
  std::vector<Scalar> table_omega;
  std::vector<Scalar> table_amplitude;
};

/// Amplitude spectrum of the pulse at a single frequency.
Complex pulse_amplitude(const PulseSpec& p, Scalar omega);
ComplexSpectrum pulse_spectrum(const PulseSpec& p, const FrequencyGrid& grid);
/// Time-domain envelope sampled on t_min + k dt.
TimeSignal pulse_signal(const PulseSpec& p, Scalar t_min, Scalar dt,
                        Index n_samples);
/// Fraction of the pulse energy arriving after time t0.
Scalar energy_fraction_after(const PulseSpec& p, Scalar t0);

}  // namespace crib
