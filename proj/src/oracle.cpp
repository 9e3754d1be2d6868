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

#include "crib/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "crib/quadrature.hpp"
#include "crib/special.hpp"

namespace crib {

namespace {

QuadratureRule broadening_rule(const SpectralDistribution& d, int n,
                               Scalar support_widths) {
  if (n < 8 || n % 8 != 0)
    throw ConfigError("oracle broadening nodes must be a positive multiple of 8");
  const int panels = n / 8;
  QuadratureRule rule;
  switch (d.shape()) {
    case Shape::box:
    case Shape::tabulated: {
      auto [lo, hi] = d.support();
      rule = composite_gauss_legendre(lo, hi, panels);
      for (Index k = 0; k < rule.size(); ++k)
        rule.weights[k] *= eval_density(d, rule.nodes[k]);
      break;
    }
    case Shape::lorentzian: {
      // x = c + (w/2) sinh(u) over +-support_widths full widths.
      const Scalar s = d.width() / 2;
      const Scalar u_max = std::asinh(2 * support_widths);
      rule = composite_gauss_legendre(-u_max, u_max, panels);
      for (Index k = 0; k < rule.size(); ++k) {
        const Scalar u = rule.nodes[k];
        rule.nodes[k] = d.center() + s * std::sinh(u);
        rule.weights[k] *= s * std::cosh(u) * eval_density(d, rule.nodes[k]);
      }
      break;
    }
    case Shape::delta:
      throw ConfigError("the broadening distribution cannot be a delta line");
  }
  return rule;
}

// Steps the coherences of every atom at every z node and marches the field
// through the medium. Coherences are stored pre-advanced,
//   s = e^{x} sigma^n + i a E^n,   sigma^{n+1} = s + i b E^{n+1},
// so that the implicit z march only needs P = sum_k w_k s_k per node.
class Stepper {
 public:
  Stepper(const CoherenceField& f, Scalar nu, Scalar h, bool reverse_z)
      : n_atoms_(f.atoms()),
        n_nodes_(f.sigma.cols()),
        nu_(nu),
        dz_(1.0 / static_cast<Scalar>(n_nodes_ - 1)),
        reverse_(reverse_z),
        w_(f.weight) {
    ex_re_.resize(n_atoms_);
    ex_im_.resize(n_atoms_);
    ic_re_.resize(n_atoms_);
    ic_im_.resize(n_atoms_);
    ia_.resize(n_atoms_);
    ib_.resize(n_atoms_);
    Complex b_sum = 0;
    for (Index k = 0; k < n_atoms_; ++k) {
      const Scalar detuning = f.delta0[k] + f.deltap[k];
      const Complex x(0, -detuning * h);
      const Complex ex = std::exp(x);
      const Complex p1 = phi1(x), p2 = phi2(x);
      const Complex a = h * (p1 - p2), b = h * p2;
      const Complex ic = I * (ex * b + a);
      ex_re_[k] = ex.real();
      ex_im_[k] = ex.imag();
      ic_re_[k] = ic.real();
      ic_im_[k] = ic.imag();
      ia_[k] = I * a;
      ib_[k] = I * b;
      b_sum += w_[k] * b;
    }
    b_sum_ = b_sum;
    s_re_.resize(n_atoms_, n_nodes_);
    s_im_.resize(n_atoms_, n_nodes_);
    p_.resize(n_nodes_);
    e_.resize(n_nodes_);
  }

  // Starts from the coherences in f with the field they radiate
  // instantaneously, given the boundary value at the entrance face.
  void start(const CoherenceField& f, Complex boundary) {
    std::vector<Complex> source(n_nodes_);
    for (Index m = 0; m < n_nodes_; ++m) {
      const Index c = column(m);
      source[m] = (f.sigma.col(c).array() * w_.array()).sum();
    }
    e_[0] = boundary;
    for (Index m = 1; m < n_nodes_; ++m)
      e_[m] = e_[m - 1] + I * nu_ * dz_ / 2.0 * (source[m - 1] + source[m]);
    for (Index m = 0; m < n_nodes_; ++m) {
      const Index c = column(m);
      Complex p = 0;
      for (Index k = 0; k < n_atoms_; ++k) {
        const Complex s = Complex(ex_re_[k], ex_im_[k]) * f.sigma(k, c) +
                          ia_[k] * e_[m];
        s_re_(k, c) = s.real();
        s_im_(k, c) = s.imag();
        p += w_[k] * s;
      }
      p_[m] = p;
    }
  }

  // One time step with the given boundary value. When `finish` is set the
  // coherences are completed to sigma^{n+1} instead of being pre-advanced.
  void step(Complex boundary, bool finish = false) {
    const Complex damp = 1.0 + nu_ * dz_ * b_sum_ / 2.0;
    const Complex half = I * nu_ * dz_ / 2.0;
    e_[0] = boundary;
    Complex source = p_[0] + I * b_sum_ * e_[0];
    advance(0, finish);
    for (Index m = 1; m < n_nodes_; ++m) {
      e_[m] = (e_[m - 1] + half * (source + p_[m])) / damp;
      source = p_[m] + I * b_sum_ * e_[m];
      advance(m, finish);
    }
  }

  Complex exit_field() const { return e_[n_nodes_ - 1]; }
  const std::vector<Complex>& field() const { return e_; }

  void write_back(CoherenceField& f) const {
    for (Index c = 0; c < n_nodes_; ++c)
      for (Index k = 0; k < n_atoms_; ++k)
        f.sigma(k, c) = Complex(s_re_(k, c), s_im_(k, c));
  }

 private:
  Index column(Index m) const { return reverse_ ? n_nodes_ - 1 - m : m; }

  void advance(Index m, bool finish) {
    const Index c = column(m);
    Scalar* sr = s_re_.col(c).data();
    Scalar* si = s_im_.col(c).data();
    const Scalar* w = w_.data();
    const Complex e = e_[m];
    if (finish) {
      for (Index k = 0; k < n_atoms_; ++k) {
        const Complex add = ib_[k] * e;
        sr[k] += add.real();
        si[k] += add.imag();
      }
      return;
    }
    const Scalar er = e.real(), ei = e.imag();
    const Scalar* xr = ex_re_.data();
    const Scalar* xi = ex_im_.data();
    const Scalar* cr = ic_re_.data();
    const Scalar* ci = ic_im_.data();
    Scalar pr = 0, pi_ = 0;
#pragma omp simd reduction(+ : pr, pi_)
    for (Index k = 0; k < n_atoms_; ++k) {
      const Scalar r = xr[k] * sr[k] - xi[k] * si[k] + cr[k] * er - ci[k] * ei;
      const Scalar q = xr[k] * si[k] + xi[k] * sr[k] + cr[k] * ei + ci[k] * er;
      sr[k] = r;
      si[k] = q;
      pr += w[k] * r;
      pi_ += w[k] * q;
    }
    p_[m] = Complex(pr, pi_);
  }

  Index n_atoms_, n_nodes_;
  Scalar nu_, dz_;
  bool reverse_;
  RealVector w_;
  RealVector ex_re_, ex_im_, ic_re_, ic_im_;
  std::vector<Complex> ia_, ib_;
  Complex b_sum_;
  Eigen::MatrixXd s_re_, s_im_;
  std::vector<Complex> p_;
  std::vector<Complex> e_;
};

Complex sample(const TimeSignal& s, Scalar t) {
  if (s.size() == 0) return 0;
  const Scalar x = (t - s.t_min) / s.dt;
  if (x < -1e-9 || x > static_cast<Scalar>(s.size() - 1) + 1e-9) return 0;
  const Index i = std::clamp<Index>(static_cast<Index>(std::floor(x)), 0,
                                    s.size() - 1);
  if (i == s.size() - 1) return s.values[i];
  const Scalar frac = x - static_cast<Scalar>(i);
  return (1 - frac) * s.values[i] + frac * s.values[i + 1];
}

Index steps_for(Scalar span, Scalar dt) {
  return std::max<Index>(1, static_cast<Index>(std::ceil(span / dt - 1e-9)));
}

}  // namespace

void OracleConfig::validate(const MediumSpec& m) const {
  if (n_z < 64) throw ConfigError("oracle needs at least 64 spatial cells");
  if (n_delta0 < 1) throw ConfigError("oracle needs at least one initial-line node");
  if (n_deltap < 8 || n_deltap % 8 != 0)
    throw ConfigError("oracle broadening nodes must be a positive multiple of 8");
  if (!(t_start < 0) || !(t_end > 0))
    throw ConfigError("oracle window must straddle t = 0");
  if (!(support_widths > 0)) throw ConfigError("support widths must be positive");
  Scalar rate = 1;
  if (m.kernels.broadening.shape() != Shape::delta)
    rate = std::max(rate, m.kernels.broadening.width());
  if (m.kernels.initial.shape() != Shape::delta)
    rate = std::max(rate, m.kernels.initial.width());
  const Scalar limit = 0.02 / rate;
  if (!(dt > 0) || dt > limit * (1 + 1e-12))
    throw ConfigError("oracle time step " + std::to_string(dt) +
                      " exceeds the limit " + std::to_string(limit));
  if (m.transit != 0)
    throw ConfigError("the time-domain oracle requires transit = 0");
}

CoherenceField make_coherence_field(const MediumSpec& m,
                                    const OracleConfig& cfg) {
  const QuadratureRule initial =
      m.kernels.initial.shape() == Shape::delta
          ? initial_line_rule(m.kernels.initial, 1, cfg.support_widths)
          : initial_line_rule(m.kernels.initial, cfg.n_delta0,
                              cfg.support_widths);
  const QuadratureRule broad =
      broadening_rule(m.kernels.broadening, cfg.n_deltap, cfg.support_widths);
  const Index n0 = initial.size(), np = broad.size();
  CoherenceField f;
  f.n_deltap = static_cast<int>(np);
  f.delta0.resize(n0 * np);
  f.deltap.resize(n0 * np);
  f.weight.resize(n0 * np);
  for (Index k = 0; k < n0; ++k)
    for (Index j = 0; j < np; ++j) {
      f.delta0[k * np + j] = initial.nodes[k];
      f.deltap[k * np + j] = broad.nodes[j];
      f.weight[k * np + j] = initial.weights[k] * broad.weights[j];
    }
  f.sigma = Eigen::MatrixXcd::Zero(n0 * np, cfg.n_z + 1);
  return f;
}

AbsorptionResult absorb(const MediumSpec& m, const TimeSignal& in,
                        const OracleConfig& cfg) {
  m.validate();
  cfg.validate(m);
  const Scalar total = energy(in);
  if (total > 0 && energy_after(in, 0) > 1e-6 * total)
    throw ConfigError("input pulse has not entered the medium by t = 0");

  AbsorptionResult result;
  result.state = make_coherence_field(m, cfg);
  const Index n = steps_for(-cfg.t_start, cfg.dt);
  const Scalar h = -cfg.t_start / static_cast<Scalar>(n);
  result.transmitted.t_min = cfg.t_start;
  result.transmitted.dt = h;
  result.transmitted.values.resize(n + 1);

  Stepper stepper(result.state, m.nu, h, false);
  stepper.start(result.state, sample(in, cfg.t_start));
  result.transmitted.values[0] = stepper.exit_field();
  for (Index i = 1; i <= n; ++i) {
    stepper.step(sample(in, cfg.t_start + static_cast<Scalar>(i) * h), i == n);
    result.transmitted.values[i] = stepper.exit_field();
  }
  stepper.write_back(result.state);

  Scalar peak_in = in.size() ? in.values.cwiseAbs2().maxCoeff() : 0;
  Scalar peak_left = 0;
  for (const Complex& e : stepper.field()) peak_left = std::max(peak_left, std::norm(e));
  result.residual_field = peak_in > 0 ? peak_left / peak_in : 0;
  return result;
}

CoherenceField rephase(const CoherenceField& state, const ProtocolConfig& p) {
  if (state.rephased) throw StateError("coherence has already been rephased");
  CoherenceField out = state;
  const Index np = state.n_deltap;
  const Index n0 = np > 0 ? state.atoms() / np : 0;
  // d' -> -d'; the atom previously at slot j moves to slot np - 1 - j so the
  // detuning axis stays sorted. Weights travel with their atoms.
  for (Index k = 0; k < n0; ++k)
    for (Index j = 0; j < np; ++j) {
      const Index to = k * np + j, from = k * np + (np - 1 - j);
      out.deltap[to] = -state.deltap[from];
      out.weight[to] = state.weight[from];
      out.sigma.row(to) = state.sigma.row(from);
    }
  out.direction = p.direction;
  out.rephased = true;
  return out;
}

TimeSignal retrieve(const CoherenceField& state, const MediumSpec& m,
                    const ProtocolConfig& p, const OracleConfig& cfg,
                    CoherenceField* final_state) {
  m.validate();
  cfg.validate(m);
  if (!state.rephased) throw StateError("retrieval needs a rephased coherence");
  if (state.direction != p.direction)
    throw StateError("coherence direction does not match the protocol");

  const Index n = steps_for(cfg.t_end, cfg.dt);
  const Scalar h = cfg.t_end / static_cast<Scalar>(n);
  TimeSignal out;
  out.t_min = 0;
  out.dt = h;
  out.values.resize(n + 1);

  Stepper stepper(state, m.nu, h, p.direction == Direction::backward);
  stepper.start(state, 0);
  out.values[0] = stepper.exit_field();
  for (Index i = 1; i <= n; ++i) {
    stepper.step(0, i == n && final_state);
    out.values[i] = stepper.exit_field();
  }
  if (final_state) {
    *final_state = state;
    stepper.write_back(*final_state);
  }
  return out;
}

Scalar stored_energy(const CoherenceField& state, const MediumSpec& m) {
  const Index nodes = state.sigma.cols();
  if (nodes < 2) return 0;
  const Scalar dz = 1.0 / static_cast<Scalar>(nodes - 1);
  Scalar sum = 0;
  for (Index c = 0; c < nodes; ++c) {
    const Scalar column =
        (state.sigma.col(c).cwiseAbs2().array() * state.weight.array()).sum();
    sum += (c == 0 || c == nodes - 1 ? 0.5 : 1.0) * column;
  }
  return m.nu * dz * sum;
}

TimeSignal oracle_input(const PulseSpec& pulse, const OracleConfig& cfg) {
  const Index n = steps_for(-cfg.t_start, cfg.dt);
  const Scalar h = -cfg.t_start / static_cast<Scalar>(n);
  return pulse_signal(pulse, cfg.t_start, h, n + 1);
}

OracleRun run_oracle(const MediumSpec& m, const ProtocolConfig& p,
                     const PulseSpec& pulse, const OracleConfig& cfg) {
  p.validate();
  PulseSpec centred = pulse;
  centred.center_time = -p.storage_time / 2;
  // The sampled input stops at t = 0; a tail beyond it would be dropped.
  if (energy_fraction_after(centred, 0) > 1e-6)
    throw ConfigError("storage time too short: pulse has not entered by t = 0");
  OracleRun run;
  run.input = oracle_input(centred, cfg);
  AbsorptionResult absorbed = absorb(m, run.input, cfg);
  run.transmitted = std::move(absorbed.transmitted);
  run.stored_energy = stored_energy(absorbed.state, m);
  run.residual_field = absorbed.residual_field;
  CoherenceField left;
  run.output = retrieve(rephase(absorbed.state, p), m, p, cfg, &left);
  run.remaining_energy = stored_energy(left, m);
  return run;
}

}  // namespace crib
