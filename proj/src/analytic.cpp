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

#include "crib/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "crib/special.hpp"

namespace crib {

namespace {

// Maps a Gauss-Legendre variable u onto initial detunings. Lorentzian lines
// use x = c + s sinh(u) so that the node spacing grows with distance from
// the line centre; finite supports are mapped affinely.
struct LineMap {
  bool hyperbolic = false;
  Scalar center = 0;
  Scalar scale = 1;
  Scalar u_lo = -1;
  Scalar u_hi = 1;

  Scalar detuning(Scalar u) const {
    return center + scale * (hyperbolic ? std::sinh(u) : u);
  }
  Scalar jacobian(Scalar u) const {
    return scale * (hyperbolic ? std::cosh(u) : 1.0);
  }
  Scalar inverse(Scalar x) const {
    const Scalar v = (x - center) / scale;
    return hyperbolic ? std::asinh(v) : v;
  }
};

LineMap make_line_map(const SpectralDistribution& g0, Scalar support_widths) {
  LineMap map;
  switch (g0.shape()) {
    case Shape::delta:
      map.center = g0.center();
      break;
    case Shape::lorentzian: {
      map.hyperbolic = true;
      map.center = g0.center();
      map.scale = g0.width() / 2;
      const Scalar reach = support_widths * std::max<Scalar>(g0.width(), 1);
      map.u_hi = std::asinh(reach / map.scale);
      map.u_lo = -map.u_hi;
      break;
    }
    case Shape::box:
    case Shape::tabulated: {
      auto [lo, hi] = g0.support();
      map.center = 0.5 * (lo + hi);
      map.scale = 0.5 * (hi - lo);
      break;
    }
  }
  return map;
}

void fill_rule(const SpectralDistribution& g0, const LineMap& map, int n,
               Scalar u_a, Scalar u_b, QuadratureRule& rule) {
  const auto& gl = gauss_legendre(n);
  const Scalar mid = 0.5 * (u_a + u_b), half = 0.5 * (u_b - u_a);
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    const Scalar u = mid + half * gl.nodes[k];
    const Scalar x = map.detuning(u);
    rule.nodes[k] = x;
    rule.weights[k] = gl.weights[k] * half * map.jacobian(u) * eval_density(g0, x);
  }
}

// Integrand of the retrieval formula for one (omega, initial detuning) pair,
// excluding the quadrature weight and the -nu prefactor.
using RetrievalTerm = std::function<Complex(Scalar omega, Complex f_omega,
                                            Scalar delta0, Complex input)>;

ComplexSpectrum integrate_retrieval(const MediumSpec& m,
                                    const SpectrumFunction& in,
                                    const FrequencyGrid& grid,
                                    const Delta0Settings& settings,
                                    SolverDiagnostics* diag,
                                    const ResponseKernels& kernels,
                                    const RetrievalTerm& term) {
  const auto& g0 = m.kernels.initial;
  const auto& gp = m.kernels.broadening;
  ComplexSpectrum out{grid, ComplexVector::Zero(grid.size())};
  if (m.nu == 0) {
    if (diag) *diag = {};
    return out;
  }

  ComplexVector f_values(grid.size());
  for (Index i = 0; i < grid.size(); ++i)
    f_values[i] = kernels.F(grid.omega(i));

  if (g0.shape() == Shape::delta) {
    const Scalar d0 = g0.center();
    for (Index i = 0; i < grid.size(); ++i) {
      const Scalar w = grid.omega(i);
      out.values[i] =
          -m.nu * term(w, f_values[i], d0, in(-w + 2 * d0));
    }
    if (diag) *diag = {1, 0};
    return out;
  }

  const LineMap map = make_line_map(g0, settings.support_widths);
  const bool clip = gp.shape() == Shape::box;
  auto [gp_lo, gp_hi] = gp.support();

  auto evaluate = [&](int n) {
    ComplexSpectrum result{grid, ComplexVector::Zero(grid.size())};
    QuadratureRule rule;
    for (Index i = 0; i < grid.size(); ++i) {
      const Scalar w = grid.omega(i);
      Scalar u_a = map.u_lo, u_b = map.u_hi;
      if (clip) {
        // J(w; d0) vanishes unless w - d0 lies inside the broadening band.
        u_a = std::max(u_a, map.inverse(w - gp_hi));
        u_b = std::min(u_b, map.inverse(w - gp_lo));
        if (!(u_b > u_a)) continue;
      }
      fill_rule(g0, map, n, u_a, u_b, rule);
      Complex acc = 0;
      for (int k = 0; k < n; ++k) {
        const Scalar d0 = rule.nodes[k];
        acc += rule.weights[k] * term(w, f_values[i], d0, in(-w + 2 * d0));
      }
      result.values[i] = -m.nu * acc;
    }
    return result;
  };

  int n = std::max(settings.initial_nodes, 2);
  ComplexSpectrum previous = evaluate(n);
  Scalar change = 1;
  while (true) {
    const int next = 2 * n - 1;
    if (next > settings.max_nodes) break;
    ComplexSpectrum current = evaluate(next);
    const Scalar norm = current.values.norm();
    change = norm > 0 ? (current.values - previous.values).norm() / norm : 0;
    previous = std::move(current);
    n = next;
    if (change < settings.rel_tol) {
      if (diag) *diag = {n, change};
      return previous;
    }
  }
  throw ConvergenceError(
      "initial-line quadrature did not converge; relative change " +
          std::to_string(change) + " at " + std::to_string(n) + " nodes",
      change);
}

SpectrumFunction sampled_input(const ComplexSpectrum& in) {
  return [&in](Scalar w) { return in.at(w); };
}

ComplexSpectrum reflected_fast_path(const MediumSpec& m,
                                    const ComplexSpectrum& in,
                                    const ResponseKernels& kernels,
                                    const RetrievalTerm& term) {
  ComplexSpectrum out{in.grid, ComplexVector::Zero(in.grid.size())};
  if (m.nu == 0) return out;
  for (Index i = 0; i < in.grid.size(); ++i) {
    const Scalar w = in.grid.omega(i);
    out.values[i] = -m.nu * term(w, kernels.F(w), 0.0,
                                 in.values[in.grid.mirror(i)]);
  }
  return out;
}

RetrievalTerm backward_term(const MediumSpec& m,
                            const ResponseKernels& kernels) {
  const Scalar nu = m.nu, tau = m.transit;
  return [nu, tau, &kernels](Scalar w, Complex f_w, Scalar d0, Complex input) {
    const Scalar j = kernels.J(w, d0);
    if (j == 0) return Complex(0);
    const Complex x =
        nu * (kernels.H(-w + 2 * d0) + f_w) - 2.0 * I * d0 * tau;
    return j * one_minus_exp_ratio(x) * input;
  };
}

RetrievalTerm forward_term(const MediumSpec& m,
                           const ResponseKernels& kernels) {
  const Scalar nu = m.nu, tau = m.transit;
  return [nu, tau, &kernels](Scalar w, Complex f_w, Scalar d0, Complex input) {
    const Scalar j = kernels.J(w, d0);
    if (j == 0) return Complex(0);
    const Complex h = kernels.H(-w + 2 * d0);
    const Complex arg = nu * (f_w - h) / 2.0 - I * (w - d0) * tau;
    return j * sinhc(arg) * std::exp(I * d0 * tau - nu * (f_w + h) / 2.0) *
           input;
  };
}

void require_direction(const ProtocolConfig& p, Direction expected) {
  p.validate();
  if (p.direction != expected)
    throw ConfigError("protocol direction does not match the requested output");
}

bool centred_delta(const MediumSpec& m) {
  return m.kernels.initial.shape() == Shape::delta &&
         m.kernels.initial.center() == 0;
}

}  // namespace

std::string to_string(Direction d) {
  return d == Direction::backward ? "backward" : "forward";
}

Direction direction_from_string(const std::string& name) {
  if (name == "backward" || name == "backward_complete") return Direction::backward;
  if (name == "forward" || name == "forward_simplified") return Direction::forward;
  throw ConfigError("unknown protocol direction '" + name + "'");
}

void ProtocolConfig::validate() const {
  if (!(storage_time >= 10) || !std::isfinite(storage_time))
    throw ConfigError("storage time must be at least 10 pulse durations");
}

ComplexSpectrum transmitted_spectrum(const MediumSpec& m,
                                     const ComplexSpectrum& in, Scalar z) {
  m.validate();
  if (!(z >= 0 && z <= 1)) throw ConfigError("depth must lie in [0, 1]");
  ComplexSpectrum out = in;
  if (m.nu == 0 && m.transit == 0) return out;
  const ResponseKernels kernels(m.kernels);
  for (Index i = 0; i < in.grid.size(); ++i) {
    const Scalar w = in.grid.omega(i);
    const Complex absorption = m.nu == 0 ? Complex(0) : m.nu * z * kernels.H(w);
    out.values[i] *= std::exp(I * w * z * m.transit - absorption);
  }
  return out;
}

ComplexSpectrum backward_output_spectrum(const MediumSpec& m,
                                         const ProtocolConfig& p,
                                         const SpectrumFunction& in,
                                         const FrequencyGrid& grid,
                                         const Delta0Settings& settings,
                                         SolverDiagnostics* diag) {
  m.validate();
  require_direction(p, Direction::backward);
  const ResponseKernels kernels(m.kernels);
  return integrate_retrieval(m, in, grid, settings, diag, kernels,
                             backward_term(m, kernels));
}

ComplexSpectrum backward_output_spectrum(const MediumSpec& m,
                                         const ProtocolConfig& p,
                                         const ComplexSpectrum& in,
                                         const Delta0Settings& settings,
                                         SolverDiagnostics* diag) {
  if (!centred_delta(m))
    return backward_output_spectrum(m, p, sampled_input(in), in.grid, settings,
                                    diag);
  m.validate();
  require_direction(p, Direction::backward);
  const ResponseKernels kernels(m.kernels);
  if (diag) *diag = {1, 0};
  return reflected_fast_path(m, in, kernels, backward_term(m, kernels));
}

ComplexSpectrum forward_output_spectrum(const MediumSpec& m,
                                        const ProtocolConfig& p,
                                        const SpectrumFunction& in,
                                        const FrequencyGrid& grid,
                                        const Delta0Settings& settings,
                                        SolverDiagnostics* diag) {
  m.validate();
  require_direction(p, Direction::forward);
  const ResponseKernels kernels(m.kernels);
  return integrate_retrieval(m, in, grid, settings, diag, kernels,
                             forward_term(m, kernels));
}

ComplexSpectrum forward_output_spectrum(const MediumSpec& m,
                                        const ProtocolConfig& p,
                                        const ComplexSpectrum& in,
                                        const Delta0Settings& settings,
                                        SolverDiagnostics* diag) {
  if (!centred_delta(m))
    return forward_output_spectrum(m, p, sampled_input(in), in.grid, settings,
                                   diag);
  m.validate();
  require_direction(p, Direction::forward);
  const ResponseKernels kernels(m.kernels);
  if (diag) *diag = {1, 0};
  return reflected_fast_path(m, in, kernels, forward_term(m, kernels));
}

ComplexSpectrum output_spectrum(const MediumSpec& m, const ProtocolConfig& p,
                                const SpectrumFunction& in,
                                const FrequencyGrid& grid,
                                const Delta0Settings& settings,
                                SolverDiagnostics* diag) {
  return p.direction == Direction::backward
             ? backward_output_spectrum(m, p, in, grid, settings, diag)
             : forward_output_spectrum(m, p, in, grid, settings, diag);
}

Complex storage_decay_factor(const MediumSpec& m, Scalar t) {
  return distribution_fourier(m.kernels.initial, t);
}

QuadratureRule initial_line_rule(const SpectralDistribution& initial, int n,
                                 Scalar support_widths) {
  if (initial.shape() == Shape::delta)
    return {RealVector::Constant(1, initial.center()), RealVector::Ones(1)};
  const LineMap map = make_line_map(initial, support_widths);
  QuadratureRule rule;
  fill_rule(initial, map, n, map.u_lo, map.u_hi, rule);
  return rule;
}

FrequencyGrid default_grid(const MediumSpec& m, Scalar max_step,
                           Scalar min_half_span) {
  if (!(max_step > 0) || !(min_half_span > 0))
    throw ConfigError("grid step and span must be positive");
  const auto& g0 = m.kernels.initial;
  const auto& gp = m.kernels.broadening;
  Scalar half = min_half_span;
  Scalar step = max_step;
  if (gp.shape() != Shape::delta) {
    half = std::max(half, 4 * gp.width());
    step = std::min(step, gp.width() / 10);
  }
  if (g0.shape() != Shape::delta) half = std::max(half, 4 * g0.width());
  const Scalar edge = (gp.shape() == Shape::box && g0.shape() == Shape::delta &&
                       gp.center() == 0 && g0.center() == 0)
                          ? gp.width() / 2
                          : 0;
  return FrequencyGrid::covering(half, step, edge);
}

TimeSignal output_signal(const ComplexSpectrum& out, Scalar t_max, Scalar dt) {
  if (!(t_max > 0) || !(dt > 0)) throw ConfigError("invalid output window");
  const Index n = static_cast<Index>(std::floor(t_max / dt + 1e-9)) + 1;
  return inverse_fourier_transform(out, 0.0, dt, n);
}

}  // namespace crib
