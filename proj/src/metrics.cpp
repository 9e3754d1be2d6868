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

#include "crib/metrics.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace crib {

Scalar efficiency(const ComplexSpectrum& out, const ComplexSpectrum& in) {
  if (!(out.grid == in.grid))
    throw MetricError("efficiency needs spectra on the same grid");
  const Scalar e_in = spectral_energy(in);
  if (!(e_in > 0)) throw MetricError("input spectrum carries no energy");
  return spectral_energy(out) / e_in;
}

Scalar efficiency(const TimeSignal& out, const TimeSignal& in) {
  const Scalar e_in = energy(in);
  if (!(e_in > 0)) throw MetricError("input signal carries no energy");
  return energy(out) / e_in;
}

Scalar shape_fidelity(const TimeSignal& out, const TimeSignal& in) {
  if (std::abs(out.dt - in.dt) > 1e-12 * in.dt)
    throw MetricError("shape fidelity needs signals with the same time step");
  const Scalar n_out = out.values.squaredNorm();
  const Scalar n_in = in.values.squaredNorm();
  if (!(n_out > 0) || !(n_in > 0))
    throw MetricError("shape fidelity of a zero-energy signal");

  // Circular cross-correlation of out with the reversed input, padded so
  // that no lag wraps around.
  const Index n = out.size() + in.size();
  Index size = 1;
  while (size < n) size <<= 1;
  std::vector<Complex> a(size, 0.0), b(size, 0.0);
  for (Index i = 0; i < out.size(); ++i) a[i] = out.values[i];
  for (Index i = 0; i < in.size(); ++i) b[i] = in.values[in.size() - 1 - i];

  Eigen::FFT<Scalar> fft;
  std::vector<Complex> fa, fb, corr;
  fft.fwd(fa, a);
  fft.fwd(fb, b);
  for (Index i = 0; i < size; ++i) fa[i] *= std::conj(fb[i]);
  fft.inv(corr, fa);

  Scalar best = 0;
  for (const Complex& c : corr) best = std::max(best, std::norm(c));
  return std::min<Scalar>(1, best / (n_out * n_in));
}

Scalar fit_exponential_decay(
    const std::vector<std::pair<Scalar, Scalar>>& points) {
  if (points.size() < 5)
    throw MetricError("decay fit needs at least 5 points");
  Scalar st = 0, sy = 0;
  for (auto [t, eff] : points) {
    if (!(eff > 0)) throw MetricError("decay fit needs positive efficiencies");
    st += t;
    sy += std::log(eff);
  }
  const Scalar n = static_cast<Scalar>(points.size());
  const Scalar mt = st / n, my = sy / n;
  Scalar sxx = 0, sxy = 0;
  for (auto [t, eff] : points) {
    sxx += (t - mt) * (t - mt);
    sxy += (t - mt) * (std::log(eff) - my);
  }
  if (!(sxx > 0)) throw MetricError("decay fit needs distinct storage times");
  return -sxy / sxx;
}

MemoryReport memory_report(const ComplexSpectrum& out_spectrum,
                           const ComplexSpectrum& in_spectrum,
                           const TimeSignal& out, const TimeSignal& in) {
  MemoryReport r;
  r.efficiency = efficiency(out_spectrum, in_spectrum);
  r.shape_fidelity = shape_fidelity(out, in);
  Index peak = 0;
  out.values.cwiseAbs2().maxCoeff(&peak);
  r.peak_time = out.t(peak);
  r.diagnostics["efficiency_time_domain"] = efficiency(out, in);
  return r;
}

}  // namespace crib
