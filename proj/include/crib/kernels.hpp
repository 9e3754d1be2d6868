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

#include "crib/spectral.hpp"

namespace crib {

enum class EvaluationMode { closed_form, quadrature };

/// Atomic distributions entering the response kernels.
///
/// `initial` is the narrow line before broadening, `broadening` the
/// controlled shift distribution applied to every initial detuning.
struct KernelContext {
  SpectralDistribution initial = SpectralDistribution::delta();
  SpectralDistribution broadening = SpectralDistribution::box(1.0);
  EvaluationMode mode = EvaluationMode::closed_form;
};

/// Medium parameters. `nu` is the effective coupling width (coupling
/// constant times medium length), `transit` the ratio of the pulse bandwidth
/// to the inverse transit time c / L.
struct MediumSpec {
  Scalar nu = 0;
  KernelContext kernels;
  Scalar transit = 0;

  void validate() const;
};

/// One-sided transform of the broadened distribution,
///   H(w) = pi G(w) + i PV int G(x) / (w - x) dx,  G = initial * broadening.
Complex kernel_H(const KernelContext& ctx, Scalar omega);

/// Same transform for the detunings after reversal, initial * reflected
/// broadening. Equals conj(H(-w)) whenever the initial line is symmetric.
Complex kernel_F(const KernelContext& ctx, Scalar omega);

/// Full-line transform J(w; d0) = 2 pi G'(w - d0).
Complex kernel_J(const KernelContext& ctx, Scalar omega, Scalar delta0);

/// alpha(w) L = 2 nu Re H(w).
Scalar optical_depth(const MediumSpec& m, Scalar omega);

/// True when kernel_H / kernel_F have analytic expressions for this pair
/// (delta, Lorentzian and box factors in any combination).
bool has_closed_form(const SpectralDistribution& initial,
                     const SpectralDistribution& broadening);

/// i int (a * b)(x) / (z - x) dx for Im z >= 0. On the real axis this is the
/// upper-half-plane limit, i.e. the one-sided transform. Throws
/// SingularPoint exactly on a box band edge.
Complex resolvent(const SpectralDistribution& a, const SpectralDistribution& b,
                  Complex z);

/// Precomputed kernels for repeated evaluation in the solver loops. Uses the
/// closed forms when available and falls back to kernel_H / kernel_F.
class ResponseKernels {
 public:
  explicit ResponseKernels(const KernelContext& ctx);

  Complex H(Scalar omega) const;
  Complex F(Scalar omega) const;
  Scalar J(Scalar omega, Scalar delta0) const;
  /// H continued into the upper half plane; closed-form contexts only.
  Complex H(Complex z) const;

  const KernelContext& context() const { return ctx_; }

 private:
  struct Form {
    bool closed = false;
    Scalar shift = 0;
    Scalar damping = 0;
    int n_boxes = 0;
    Scalar widths[2] = {0, 0};
    Complex eval(Complex z) const;
  };
  static Form make_form(const SpectralDistribution& a,
                        const SpectralDistribution& b, bool closed);

  KernelContext ctx_;
  Form h_form_;
  Form f_form_;
};

/// PV int d(x) / (omega - x) dx. Exact for the box; otherwise adaptive
/// quadrature of the symmetrized integrand [d(w - u) - d(w + u)] / u, u > 0.
Scalar hilbert_pv(const SpectralDistribution& d, Scalar omega);

}  // namespace crib
