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

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "crib/spectral.hpp"

namespace crib {

/// Retrieved / input spectral energy. Both spectra must share a grid;
/// throws MetricError for a zero-energy input.
Scalar efficiency(const ComplexSpectrum& out, const ComplexSpectrum& in);

/// Same ratio from time signals (Parseval route).
Scalar efficiency(const TimeSignal& out, const TimeSignal& in);

/// |<out, reversed in>|^2 / (|out|^2 |in|^2), maximized over integer lags
/// (cross-correlation by FFT). 1 means the output is an undistorted,
/// rescaled time-reversed copy of the input. Signals must share dt.
Scalar shape_fidelity(const TimeSignal& out, const TimeSignal& in);

/// Decay rate r of Eff(T) ~ exp(-r T) by least squares on log Eff.
/// Needs at least 5 points, all positive.
Scalar fit_exponential_decay(const std::vector<std::pair<Scalar, Scalar>>& points);

struct MemoryReport {
  Scalar efficiency = 0;
  Scalar shape_fidelity = 0;
  Scalar peak_time = 0;
  std::map<std::string, Scalar> diagnostics;
};

/// Efficiency from the spectra, fidelity and peak time from the signals.
MemoryReport memory_report(const ComplexSpectrum& out_spectrum,
                           const ComplexSpectrum& in_spectrum,
                           const TimeSignal& out, const TimeSignal& in);

}  // namespace crib
