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

#include "crib/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "crib/quadrature.hpp"
#include "crib/special.hpp"

namespace crib {

namespace {

constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();

Scalar interpolate(const RealVector& x, const RealVector& y, Scalar at) {
  const Index n = x.size();
  if (n == 0 || at < x[0] || at > x[n - 1]) return 0;
  const auto* begin = x.data();
  const auto* it = std::upper_bound(begin, begin + n, at);
  Index hi = std::min<Index>(it - begin, n - 1);
  Index lo = std::max<Index>(hi - 1, 0);
  if (x[hi] == x[lo]) return y[lo];
  const Scalar s = (at - x[lo]) / (x[hi] - x[lo]);
  return (1 - s) * y[lo] + s * y[hi];
}

// (sin x - x cos x) / x^2
Scalar sin_minus_cos_ratio(Scalar x) {
  if (std::abs(x) < 1e-3) {
    const Scalar x2 = x * x;
    return x * (1.0 / 3 - x2 * (1.0 / 30 - x2 / 840));
  }
  return (std::sin(x) - x * std::cos(x)) / (x * x);
}

// Integral of y(x) exp(-i k x) dx for piecewise linear y; exact per segment.
Complex piecewise_linear_fourier(const RealVector& x, const RealVector& y,
                                 Scalar k) {
  Complex total = 0;
  for (Index i = 0; i + 1 < x.size(); ++i) {
    const Scalar a = 0.5 * (x[i + 1] - x[i]);
    if (a <= 0) continue;
    const Scalar mid = 0.5 * (x[i + 1] + x[i]);
    const Scalar mean = 0.5 * (y[i + 1] + y[i]);
    const Scalar slope = (y[i + 1] - y[i]) / (2 * a);
    const Complex even = mean * 2 * a * sinc(k * a);
    const Complex odd = -2.0 * I * a * a * sin_minus_cos_ratio(k * a) * slope;
    total += std::exp(-I * k * mid) * (even + odd);
  }
  return total;
}

Scalar trapezoid_area(const RealVector& x, const RealVector& y) {
  Scalar area = 0;
  for (Index i = 0; i + 1 < x.size(); ++i)
    area += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  return area;
}

Scalar lorentzian_cdf(Scalar x, Scalar width) {
  return 0.5 + std::atan(2 * x / width) / pi;
}

}  // namespace

std::string to_string(Shape shape) {
  switch (shape) {
    case Shape::delta: return "delta";
    case Shape::lorentzian: return "lorentzian";
    case Shape::box: return "box";
    case Shape::tabulated: return "tabulated";
  }
  return "unknown";
}

Shape shape_from_string(const std::string& name) {
  if (name == "delta") return Shape::delta;
  if (name == "lorentzian") return Shape::lorentzian;
  if (name == "box") return Shape::box;
  if (name == "tabulated") return Shape::tabulated;
  throw ConfigError("unknown distribution shape '" + name + "'");
}

SpectralDistribution SpectralDistribution::delta(Scalar center) {
  SpectralDistribution d;
  d.shape_ = Shape::delta;
  d.center_ = center;
  return d;
}

SpectralDistribution SpectralDistribution::lorentzian(Scalar width,
                                                      Scalar center) {
  if (!(width > 0) || !std::isfinite(width))
    throw ConfigError("lorentzian width must be positive and finite");
  SpectralDistribution d;
  d.shape_ = Shape::lorentzian;
  d.width_ = width;
  d.center_ = center;
  return d;
}

SpectralDistribution SpectralDistribution::box(Scalar width, Scalar center) {
  if (!(width > 0) || !std::isfinite(width))
    throw ConfigError("box width must be positive and finite");
  SpectralDistribution d;
  d.shape_ = Shape::box;
  d.width_ = width;
  d.center_ = center;
  return d;
}

SpectralDistribution SpectralDistribution::tabulated(
    std::vector<Scalar> detuning, std::vector<Scalar> density) {
  if (detuning.size() != density.size() || detuning.size() < 2)
    throw ConfigError("tabulated distribution needs >= 2 matching samples");
  for (std::size_t i = 0; i < detuning.size(); ++i) {
    if (density[i] < 0 || !std::isfinite(density[i]))
      throw ConfigError("tabulated density must be finite and nonnegative");
    if (i > 0 && !(detuning[i] > detuning[i - 1]))
      throw ConfigError("tabulated detunings must be strictly increasing");
  }
  SpectralDistribution d;
  d.shape_ = Shape::tabulated;
  d.table_x_ = Eigen::Map<const RealVector>(detuning.data(), detuning.size());
  d.table_y_ = Eigen::Map<const RealVector>(density.data(), density.size());
  const Scalar area = trapezoid_area(d.table_x_, d.table_y_);
  if (!(area > 0)) throw ConfigError("tabulated density has zero area");
  d.table_y_ /= area;
  d.width_ = d.table_x_[d.table_x_.size() - 1] - d.table_x_[0];
  d.center_ = 0;
  return d;
}

SpectralDistribution SpectralDistribution::make(Shape shape, Scalar width,
                                                Scalar center) {
  switch (shape) {
    case Shape::delta: return delta(center);
    case Shape::lorentzian: return lorentzian(width, center);
    case Shape::box: return box(width, center);
    case Shape::tabulated: break;
  }
  throw ConfigError("tabulated distributions need sample data");
}

SpectralDistribution SpectralDistribution::reflected() const {
  SpectralDistribution d = *this;
  d.center_ = -center_;
  if (shape_ == Shape::tabulated) {
    d.table_x_ = -table_x_.reverse();
    d.table_y_ = table_y_.reverse().eval();
  }
  return d;
}

bool SpectralDistribution::is_symmetric() const {
  if (shape_ != Shape::tabulated) return center_ == 0;
  const Index n = table_x_.size();
  for (Index i = 0; i < n; ++i) {
    if (std::abs(table_x_[i] + table_x_[n - 1 - i]) > 1e-12 * width_ ||
        std::abs(table_y_[i] - table_y_[n - 1 - i]) > 1e-12 * table_y_.maxCoeff())
      return false;
  }
  return true;
}

std::pair<Scalar, Scalar> SpectralDistribution::support() const {
  switch (shape_) {
    case Shape::delta: return {center_, center_};
    case Shape::lorentzian: return {-inf, inf};
    case Shape::box: return {center_ - width_ / 2, center_ + width_ / 2};
    case Shape::tabulated:
      return {table_x_[0], table_x_[table_x_.size() - 1]};
  }
  return {-inf, inf};
}

Scalar eval_density(const SpectralDistribution& d, Scalar detuning) {
  const Scalar x = detuning - d.center();
  switch (d.shape()) {
    case Shape::delta:
      throw UnsupportedEvaluation(
          "the delta distribution has no pointwise density");
    case Shape::lorentzian: {
      const Scalar w = d.width();
      return (w / (2 * pi)) / (w * w / 4 + x * x);
    }
    case Shape::box:
      return std::abs(x) <= d.width() / 2 ? 1 / d.width() : 0;
    case Shape::tabulated:
      return interpolate(d.table_detuning(), d.table_density(), detuning);
  }
  return 0;
}

Complex distribution_fourier(const SpectralDistribution& d, Scalar t) {
  const Complex shift = std::exp(-2.0 * I * d.center() * t);
  switch (d.shape()) {
    case Shape::delta: return shift;
    case Shape::lorentzian: return shift * std::exp(-d.width() * std::abs(t));
    case Shape::box: return shift * sinc(d.width() * t);
    case Shape::tabulated:
      return piecewise_linear_fourier(d.table_detuning(), d.table_density(),
                                      2 * t);
  }
  return 0;
}

Scalar convolved_density(const SpectralDistribution& a,
                         const SpectralDistribution& b, Scalar detuning) {
  if (a.shape() == Shape::delta && b.shape() == Shape::delta)
    throw UnsupportedEvaluation("convolution of two delta lines");
  if (a.shape() == Shape::delta)
    return eval_density(b, detuning - a.center());
  if (b.shape() == Shape::delta)
    return eval_density(a, detuning - b.center());

  const Scalar x = detuning - a.center() - b.center();
  if (a.shape() == Shape::lorentzian && b.shape() == Shape::lorentzian)
    return eval_density(
        SpectralDistribution::lorentzian(a.width() + b.width()), x);
  if (a.shape() == Shape::box && b.shape() == Shape::box) {
    const Scalar lo = std::max(-a.width() / 2, x - b.width() / 2);
    const Scalar hi = std::min(a.width() / 2, x + b.width() / 2);
    return std::max<Scalar>(0, hi - lo) / (a.width() * b.width());
  }
  if ((a.shape() == Shape::lorentzian && b.shape() == Shape::box) ||
      (a.shape() == Shape::box && b.shape() == Shape::lorentzian)) {
    const auto& lor = a.shape() == Shape::lorentzian ? a : b;
    const auto& bx = a.shape() == Shape::box ? a : b;
    return (lorentzian_cdf(x + bx.width() / 2, lor.width()) -
            lorentzian_cdf(x - bx.width() / 2, lor.width())) /
           bx.width();
  }

  // At least one tabulated factor: integrate over its finite support.
  const auto& finite = a.shape() == Shape::tabulated ? a : b;
  const auto& other = a.shape() == Shape::tabulated ? b : a;
  auto [lo, hi] = finite.support();
  std::vector<Scalar> cuts(finite.table_detuning().data(),
                           finite.table_detuning().data() +
                               finite.table_detuning().size());
  if (other.shape() != Shape::lorentzian) {
    auto [olo, ohi] = other.support();
    cuts.push_back(detuning - ohi);
    cuts.push_back(detuning - olo);
  }
  auto integrand = [&](Scalar u) {
    return eval_density(finite, u) * eval_density(other, detuning - u);
  };
  return integrate_adaptive<Scalar>(integrand, lo, hi, 1e-12, cuts).value;
}

FrequencyGrid FrequencyGrid::symmetric(Scalar half_span, Index n_points) {
  if (!(half_span > 0) || n_points < 3 || n_points % 2 == 0)
    throw ConfigError(
        "frequency grid needs a positive half-span and an odd point count >= 3");
  FrequencyGrid g;
  g.half_span_ = half_span;
  g.n_ = n_points;
  return g;
}

FrequencyGrid FrequencyGrid::covering(Scalar half_span, Scalar max_step,
                                      Scalar band_edge) {
  if (!(half_span > 0) || !(max_step > 0))
    throw ConfigError("frequency grid needs positive span and step");
  Scalar h = max_step;
  if (band_edge > 0) {
    const Scalar m = std::max<Scalar>(0, std::ceil(band_edge / max_step - 0.5));
    h = band_edge / (m + 0.5);
  }
  const Scalar n_half = std::ceil(half_span / h - 1e-9);
  if (n_half > 5e7) throw ConfigError("frequency grid too large");
  return symmetric(n_half * h, 2 * static_cast<Index>(n_half) + 1);
}

RealVector FrequencyGrid::omegas() const {
  return RealVector::LinSpaced(n_, -half_span_, half_span_);
}

Complex ComplexSpectrum::at(Scalar omega) const {
  const Index n = grid.size();
  const Scalar h = grid.step();
  const Scalar pos = (omega + grid.half_span()) / h;
  if (pos < 0 || pos > n - 1) return 0;
  const Index lo = std::min<Index>(static_cast<Index>(pos), n - 2);
  const Scalar s = pos - lo;
  return (1 - s) * values[lo] + s * values[lo + 1];
}

ComplexSpectrum ComplexSpectrum::reflected() const {
  return {grid, values.reverse()};
}

TimeSignal TimeSignal::reversed() const {
  return {-t_max(), dt, values.reverse()};
}

Scalar energy(const TimeSignal& s) {
  if (s.size() < 2) return 0;
  const auto power = s.values.cwiseAbs2();
  return s.dt * (power.sum() - 0.5 * (power[0] + power[s.size() - 1]));
}

Scalar energy_after(const TimeSignal& s, Scalar t0) {
  const Index first =
      std::max<Index>(0, static_cast<Index>(std::ceil((t0 - s.t_min) / s.dt)));
  if (first >= s.size() - 1) return 0;
  TimeSignal tail{s.t(first), s.dt, s.values.tail(s.size() - first)};
  return energy(tail);
}

Scalar spectral_energy(const ComplexSpectrum& s) {
  const auto power = s.values.cwiseAbs2();
  const Index n = power.size();
  return s.grid.step() * (power.sum() - 0.5 * (power[0] + power[n - 1])) /
         (2 * pi);
}

namespace {

// sum_k w_k f_k exp(i sign omega x_k) over a uniform sample grid, trapezoid
// weights, computed by phasor recurrence with periodic resynchronization.
Complex uniform_sum(const ComplexVector& f, Scalar x0, Scalar dx, Scalar omega,
                    Scalar sign) {
  const Index n = f.size();
  const Complex step = std::exp(sign * I * omega * dx);
  Complex phase = std::exp(sign * I * omega * x0);
  Complex acc = 0.5 * f[0] * phase;
  for (Index k = 1; k < n; ++k) {
    if (k % 512 == 0)
      phase = std::exp(sign * I * omega * (x0 + k * dx));
    else
      phase *= step;
    acc += (k == n - 1 ? 0.5 : 1.0) * f[k] * phase;
  }
  return acc * dx;
}

}  // namespace

ComplexSpectrum fourier_transform(const TimeSignal& s,
                                  const FrequencyGrid& grid) {
  ComplexSpectrum out{grid, ComplexVector(grid.size())};
  for (Index i = 0; i < grid.size(); ++i)
    out.values[i] = uniform_sum(s.values, s.t_min, s.dt, grid.omega(i), 1.0);
  return out;
}

TimeSignal inverse_fourier_transform(const ComplexSpectrum& s, Scalar t_min,
                                     Scalar dt, Index n_samples) {
  TimeSignal out{t_min, dt, ComplexVector(n_samples)};
  const Scalar w0 = -s.grid.half_span();
  const Scalar dw = s.grid.step();
  for (Index k = 0; k < n_samples; ++k)
    out.values[k] = uniform_sum(s.values, w0, dw, out.t(k), -1.0) / (2 * pi);
  return out;
}

Complex pulse_amplitude(const PulseSpec& p, Scalar omega) {
  const Complex shift = std::exp(I * omega * p.center_time);
  switch (p.shape) {
    case PulseShape::lorentzian: {
      const Scalar g = p.bandwidth;
      return shift * (g / (2 * pi)) / (g * g / 4 + omega * omega);
    }
    case PulseShape::tabulated: {
      const Eigen::Map<const RealVector> x(p.table_omega.data(),
                                           p.table_omega.size());
      const Eigen::Map<const RealVector> y(p.table_amplitude.data(),
                                           p.table_amplitude.size());
      return shift * interpolate(x, y, omega);
    }
  }
  return 0;
}

ComplexSpectrum pulse_spectrum(const PulseSpec& p, const FrequencyGrid& grid) {
  ComplexSpectrum out{grid, ComplexVector(grid.size())};
  for (Index i = 0; i < grid.size(); ++i)
    out.values[i] = pulse_amplitude(p, grid.omega(i));
  return out;
}

TimeSignal pulse_signal(const PulseSpec& p, Scalar t_min, Scalar dt,
                        Index n_samples) {
  TimeSignal out{t_min, dt, ComplexVector(n_samples)};
  if (p.shape == PulseShape::lorentzian) {
    for (Index k = 0; k < n_samples; ++k)
      out.values[k] =
          std::exp(-p.bandwidth * std::abs(out.t(k) - p.center_time) / 2) /
          (2 * pi);
    return out;
  }
  const Eigen::Map<const RealVector> x(p.table_omega.data(),
                                       p.table_omega.size());
  const Eigen::Map<const RealVector> y(p.table_amplitude.data(),
                                       p.table_amplitude.size());
  for (Index k = 0; k < n_samples; ++k)
    out.values[k] =
        piecewise_linear_fourier(x, y, out.t(k) - p.center_time) / (2 * pi);
  return out;
}

Scalar energy_fraction_after(const PulseSpec& p, Scalar t0) {
  if (p.shape == PulseShape::lorentzian) {
    const Scalar d = p.bandwidth * (t0 - p.center_time);
    return d >= 0 ? 0.5 * std::exp(-d) : 1 - 0.5 * std::exp(d);
  }
  // Sample over a window set by the spectral resolution of the table.
  Scalar min_spacing = inf, max_abs = 0;
  for (std::size_t i = 0; i < p.table_omega.size(); ++i) {
    max_abs = std::max(max_abs, std::abs(p.table_omega[i]));
    if (i > 0)
      min_spacing = std::min(min_spacing, p.table_omega[i] - p.table_omega[i - 1]);
  }
  const Scalar window = 4 * pi / min_spacing;
  const Scalar dt = std::min(0.05, pi / (4 * max_abs));
  const Index n = static_cast<Index>(2 * window / dt) + 1;
  const TimeSignal s = pulse_signal(p, p.center_time - window, dt, n);
  const Scalar total = energy(s);
  return total > 0 ? energy_after(s, t0) / total : 0;
}

}  // namespace crib
