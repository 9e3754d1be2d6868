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

#include "crib/kernels.hpp"

#include <cmath>
#include <vector>

#include "crib/quadrature.hpp"

namespace crib {

namespace {

// x log x - x, the antiderivative of log, continuous at 0.
Complex log_antiderivative(Complex x) {
  if (x == Complex(0, 0)) return 0;
  return x * std::log(x) - x;
}

Scalar peak_density(const SpectralDistribution& d) {
  switch (d.shape()) {
    case Shape::lorentzian: return 2 / (pi * d.width());
    case Shape::box: return 1 / d.width();
    case Shape::tabulated: return d.table_density().maxCoeff();
    case Shape::delta: break;
  }
  return 1;
}

Scalar scale_of(const SpectralDistribution& d) {
  return d.shape() == Shape::delta ? 1.0 : d.width();
}

Complex quadrature_H(const SpectralDistribution& initial,
                     const SpectralDistribution& broadening, Scalar omega) {
  if (initial.shape() == Shape::delta) {
    const Scalar x = omega - initial.center();
    return pi * eval_density(broadening, x) + I * hilbert_pv(broadening, x);
  }
  if (broadening.shape() == Shape::delta) {
    const Scalar x = omega - broadening.center();
    return pi * eval_density(initial, x) + I * hilbert_pv(initial, x);
  }
  const Scalar real = pi * convolved_density(initial, broadening, omega);
  // The box edges are integrable log singularities placed at breakpoints;
  // a node rounded onto one contributes nothing.
  const bool box = broadening.shape() == Shape::box;
  const Scalar lo_edge = broadening.support().first;
  const Scalar hi_edge = broadening.support().second;
  auto integrand = [&](Scalar d0) {
    const Scalar x = omega - d0;
    if (box && (std::abs(x - lo_edge) <= 1e-14 * broadening.width() ||
                std::abs(x - hi_edge) <= 1e-14 * broadening.width()))
      return 0.0;
    return eval_density(initial, d0) * hilbert_pv(broadening, x);
  };
  const Scalar tol = 1e-10 * peak_density(initial);
  std::vector<Scalar> cuts;
  if (broadening.shape() == Shape::box) {
    auto [lo, hi] = broadening.support();
    cuts = {omega - hi, omega - lo};
  }
  Scalar imag = 0;
  if (initial.shape() == Shape::lorentzian) {
    const Scalar c = initial.center();
    const Scalar reach = 20 * initial.width() + 4 * scale_of(broadening) +
                         std::abs(omega - c);
    imag = integrate_adaptive<Scalar>(integrand, c - reach, c + reach, tol, cuts)
               .value;
    imag += integrate_to_infinity<Scalar>(integrand, c + reach, reach, tol).value;
    imag += integrate_to_infinity<Scalar>(
                [&](Scalar u) { return integrand(2 * c - u); }, c + reach,
                reach, tol)
                .value;
  } else {
    auto [lo, hi] = initial.support();
    if (initial.shape() == Shape::tabulated)
      cuts.insert(cuts.end(), initial.table_detuning().data(),
                  initial.table_detuning().data() +
                      initial.table_detuning().size());
    imag = integrate_adaptive<Scalar>(integrand, lo, hi, tol, cuts).value;
  }
  return {real, imag};
}

}  // namespace

void MediumSpec::validate() const {
  if (!(nu >= 0) || !std::isfinite(nu))
    throw ConfigError("medium coupling nu must be finite and >= 0");
  if (!(transit >= 0) || !std::isfinite(transit))
    throw ConfigError("transit parameter must be finite and >= 0");
  if (kernels.broadening.shape() == Shape::delta)
    throw ConfigError("the broadening distribution cannot be a delta line");
}

bool has_closed_form(const SpectralDistribution& initial,
                     const SpectralDistribution& broadening) {
  return initial.shape() != Shape::tabulated &&
         broadening.shape() != Shape::tabulated;
}

ResponseKernels::Form ResponseKernels::make_form(
    const SpectralDistribution& a, const SpectralDistribution& b,
    bool closed) {
  Form form;
  form.closed = closed && has_closed_form(a, b);
  if (!form.closed) return form;
  form.shift = a.center() + b.center();
  for (const auto* d : {&a, &b}) {
    if (d->shape() == Shape::lorentzian) form.damping += d->width() / 2;
    if (d->shape() == Shape::box) form.widths[form.n_boxes++] = d->width();
  }
  return form;
}

Complex ResponseKernels::Form::eval(Complex z) const {
  // Lorentzian factors move z into the upper half plane; delta factors only
  // shift it.
  Complex w = z - shift + I * damping;
  if (w.imag() == 0) w = Complex(w.real(), +0.0);

  if (n_boxes == 0) {
    if (w == Complex(0, 0))
      throw UnsupportedEvaluation("resolvent of a bare delta line at its center");
    return I / w;
  }
  if (n_boxes == 1) {
    const Scalar half = widths[0] / 2;
    if (w.imag() == 0 && std::abs(std::abs(w.real()) - half) <= 1e-15 * half)
      throw SingularPoint("kernel evaluated on a box band edge");
    return (I / widths[0]) * (std::log(w + half) - std::log(w - half));
  }
  const Scalar w1 = widths[0], w2 = widths[1];
  const Scalar s = (w1 + w2) / 2, d = (w2 - w1) / 2;
  return (I / (w1 * w2)) *
         (log_antiderivative(w + s) - log_antiderivative(w + d) -
          log_antiderivative(w - d) + log_antiderivative(w - s));
}

ResponseKernels::ResponseKernels(const KernelContext& ctx)
    : ctx_(ctx),
      h_form_(make_form(ctx.initial, ctx.broadening,
                        ctx.mode == EvaluationMode::closed_form)),
      f_form_(make_form(ctx.initial, ctx.broadening.reflected(),
                        ctx.mode == EvaluationMode::closed_form)) {}

Complex ResponseKernels::H(Scalar omega) const {
  return h_form_.closed ? h_form_.eval(Complex(omega, 0))
                        : kernel_H(ctx_, omega);
}

Complex ResponseKernels::F(Scalar omega) const {
  return f_form_.closed ? f_form_.eval(Complex(omega, 0))
                        : kernel_F(ctx_, omega);
}

Complex ResponseKernels::H(Complex z) const {
  if (!h_form_.closed)
    throw UnsupportedEvaluation("complex-argument kernel needs a closed form");
  return h_form_.eval(z);
}

Scalar ResponseKernels::J(Scalar omega, Scalar delta0) const {
  return 2 * pi * eval_density(ctx_.broadening, omega - delta0);
}

Complex resolvent(const SpectralDistribution& a, const SpectralDistribution& b,
                  Complex z) {
  KernelContext ctx{a, b, EvaluationMode::closed_form};
  if (!has_closed_form(a, b))
    throw UnsupportedEvaluation("no closed-form resolvent for tabulated shapes");
  return ResponseKernels(ctx).H(z);
}

Scalar hilbert_pv(const SpectralDistribution& d, Scalar omega) {
  auto integrand = [&](Scalar u) {
    if (u <= 0) return 0.0;
    return (eval_density(d, omega - u) - eval_density(d, omega + u)) / u;
  };
  const Scalar tol = 1e-11 * std::max<Scalar>(1, peak_density(d));
  switch (d.shape()) {
    case Shape::delta:
      throw UnsupportedEvaluation("principal value of a delta line");
    case Shape::lorentzian: {
      const Scalar reach = std::abs(omega - d.center()) + 10 * d.width();
      const Scalar cut = std::abs(omega - d.center());
      const Scalar cuts[] = {cut};
      return integrate_adaptive<Scalar>(integrand, 0, reach, tol, cuts).value +
             integrate_to_infinity<Scalar>(integrand, reach, reach, tol).value;
    }
    case Shape::box: {
      // Exact: the flat density integrates to a logarithm.
      auto [lo, hi] = d.support();
      if (std::abs(omega - lo) <= 1e-15 * d.width() ||
          std::abs(omega - hi) <= 1e-15 * d.width())
        throw SingularPoint("principal value evaluated on a box band edge");
      return std::log(std::abs((omega - lo) / (omega - hi))) / d.width();
    }
    case Shape::tabulated: {
      // Piecewise linear: each segment integrates to its line evaluated at
      // omega times a log, minus its slope times its length. Regrouped per
      // node, each log is weighted by the jump between the two extended
      // lines, which vanishes when omega sits on that node.
      const RealVector& x = d.table_detuning();
      const RealVector& y = d.table_density();
      const Index n = x.size();
      auto line_at = [&](Index k) {  // segment [x_k, x_k+1] at omega
        if (k < 0 || k >= n - 1) return 0.0;
        const Scalar slope = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
        return y[k] + slope * (omega - x[k]);
      };
      Scalar sum = 0;
      for (Index k = 0; k < n; ++k) {
        const Scalar jump = line_at(k) - line_at(k - 1);
        const Scalar gap = std::abs(omega - x[k]);
        if (gap == 0) {
          if (std::abs(jump) > 1e-12 * peak_density(d))
            throw SingularPoint("principal value at a density discontinuity");
          continue;
        }
        sum += jump * std::log(gap);
      }
      // Slope terms telescope to the total drop across the table.
      return sum - (y[n - 1] - y[0]);
    }
  }
  return 0;
}

Complex kernel_H(const KernelContext& ctx, Scalar omega) {
  if (ctx.mode == EvaluationMode::closed_form &&
      has_closed_form(ctx.initial, ctx.broadening))
    return resolvent(ctx.initial, ctx.broadening, Complex(omega, 0));
  return quadrature_H(ctx.initial, ctx.broadening, omega);
}

Complex kernel_F(const KernelContext& ctx, Scalar omega) {
  const auto reversed = ctx.broadening.reflected();
  if (ctx.mode == EvaluationMode::closed_form &&
      has_closed_form(ctx.initial, reversed))
    return resolvent(ctx.initial, reversed, Complex(omega, 0));
  return quadrature_H(ctx.initial, reversed, omega);
}

Complex kernel_J(const KernelContext& ctx, Scalar omega, Scalar delta0) {
  return 2 * pi * eval_density(ctx.broadening, omega - delta0);
}

Scalar optical_depth(const MediumSpec& m, Scalar omega) {
  if (m.nu == 0) return 0;
  return 2 * m.nu * kernel_H(m.kernels, omega).real();
}

}  // namespace crib
