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

#include "crib/sweep.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "crib/closed_form.hpp"
#include "crib/golden.hpp"
#include "crib/metrics.hpp"

namespace crib {

namespace {

constexpr Scalar nan = std::numeric_limits<Scalar>::quiet_NaN();

using Defaults = std::vector<std::pair<std::string, std::string>>;

Config with_defaults(const Config& user, const Defaults& defaults) {
  user.require_known(known_config_keys());
  Config c;
  for (const auto& [k, v] : defaults) c.set(k, v);
  for (const auto& [k, v] : user.entries()) c.set(k, v);
  return c;
}

std::string printf_string(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

SpectralDistribution distribution(const Config& c, const std::string& shape_key,
                                  const std::string& width_key,
                                  const std::string& shape_fallback,
                                  Scalar width_fallback) {
  const Shape shape = shape_from_string(c.get_string(shape_key, shape_fallback));
  if (shape == Shape::tabulated)
    throw ConfigError("'" + shape_key + "': tabulated shapes are library-only");
  return SpectralDistribution::make(shape, c.get_scalar(width_key, width_fallback));
}

MediumSpec medium_from(const Config& c) {
  MediumSpec m;
  m.kernels.initial =
      distribution(c, "medium.initial", "medium.gamma0", "delta", 0.1);
  m.kernels.broadening =
      distribution(c, "medium.broadening", "medium.gamma", "box", 100);
  m.transit = c.get_scalar("medium.transit", 0);
  if (c.has("medium.alpha_l") && c.has("medium.nu"))
    throw ConfigError("set either medium.nu or medium.alpha_l, not both");
  m.nu = c.has("medium.alpha_l")
             ? nu_for_depth(m.kernels, c.get_scalar("medium.alpha_l", 0))
             : c.get_scalar("medium.nu", 1);
  m.validate();
  return m;
}

PulseSpec pulse_from(const Config& c) {
  if (c.get_string("pulse.shape", "lorentzian") != "lorentzian")
    throw ConfigError("'pulse.shape': only lorentzian pulses are configurable");
  PulseSpec p;
  p.bandwidth = c.get_scalar("pulse.bandwidth", 1);
  if (!(p.bandwidth > 0)) throw ConfigError("'pulse.bandwidth' must be positive");
  return p;
}

Complex amplitude_from(const Config& c) {
  const Scalar a = c.get_scalar("pulse.amplitude", 1);
  if (a == 0) throw ConfigError("'pulse.amplitude' must be nonzero");
  return a;
}

ProtocolConfig protocol_from(const Config& c) {
  ProtocolConfig p;
  p.direction = direction_from_string(c.get_string("protocol.direction", "backward"));
  p.storage_time = c.get_scalar("protocol.storage_time", 30);
  p.validate();
  return p;
}

FrequencyGrid grid_from(const Config& c, const MediumSpec& m) {
  const FrequencyGrid g = default_grid(m, c.get_scalar("grid.max_step", 0.02),
                                       c.get_scalar("grid.half_span", 20));
  if (!c.has("grid.n_points")) return g;
  const int n = c.get_int("grid.n_points", 0);
  if (n < 3 || n % 2 == 0) throw ConfigError("'grid.n_points' must be odd and >= 3");
  return FrequencyGrid::symmetric(g.half_span(), n);
}

Delta0Settings settings_from(const Config& c) {
  Delta0Settings s;
  s.initial_nodes = c.get_int("delta0.initial_nodes", s.initial_nodes);
  s.max_nodes = c.get_int("delta0.max_nodes", s.max_nodes);
  s.rel_tol = c.get_scalar("delta0.rel_tol", s.rel_tol);
  s.support_widths = c.get_scalar("delta0.support_widths", s.support_widths);
  if (s.initial_nodes < 2 || s.max_nodes < s.initial_nodes || !(s.rel_tol > 0) ||
      !(s.support_widths > 0))
    throw ConfigError("invalid delta0.* settings");
  return s;
}

OracleConfig oracle_from(const Config& c, Scalar storage_time) {
  OracleConfig o;
  o.n_z = c.get_int("oracle.n_z", o.n_z);
  o.n_delta0 = c.get_int("oracle.n_delta0", o.n_delta0);
  o.n_deltap = c.get_int("oracle.n_deltap", o.n_deltap);
  o.dt = c.get_scalar("oracle.dt", o.dt);
  o.t_start = c.get_scalar("oracle.t_start", -storage_time);
  o.t_end = c.get_scalar("oracle.t_end", storage_time);
  o.support_widths = c.get_scalar("oracle.support_widths", o.support_widths);
  return o;
}

std::vector<Scalar> sorted(std::vector<Scalar> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<Scalar> positive_list(const Config& c, const std::string& key,
                                  const std::string& fallback) {
  auto v = sorted(c.get_list(key, fallback));
  for (Scalar x : v)
    if (!(x > 0)) throw ConfigError("'" + key + "' values must be positive");
  return v;
}

// Efficiency of a real closed-form output amplitude on the grid.
template <typename F>
Scalar closed_form_efficiency(const FrequencyGrid& grid, F&& output,
                              Scalar bandwidth) {
  ComplexSpectrum in{grid, ComplexVector(grid.size())};
  ComplexSpectrum out{grid, ComplexVector(grid.size())};
  for (Index i = 0; i < grid.size(); ++i) {
    const Scalar w = grid.omega(i);
    in.values[i] = closed_form::lorentzian_pulse(w, bandwidth);
    out.values[i] = output(w);
  }
  return efficiency(out, in);
}

Index argmax(const std::vector<Scalar>& v) {
  return std::distance(v.begin(), std::max_element(v.begin(), v.end()));
}

SweepResult start(Experiment e, const Config& c,
                  std::vector<std::string> columns) {
  SweepResult r;
  r.experiment = e;
  r.config_hash = c.hash();
  r.columns = std::move(columns);
  return r;
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::fig1: return "fig1";
    case Experiment::fig2_top: return "fig2_top";
    case Experiment::fig2_bottom: return "fig2_bottom";
    case Experiment::fig4: return "fig4";
    case Experiment::decay: return "decay";
    case Experiment::validate: return "validate";
    case Experiment::optimize: return "optimize";
    case Experiment::custom: return "custom";
  }
  return "custom";
}

Experiment experiment_from_string(const std::string& name) {
  for (Experiment e :
       {Experiment::fig1, Experiment::fig2_top, Experiment::fig2_bottom,
        Experiment::fig4, Experiment::decay, Experiment::validate,
        Experiment::optimize, Experiment::custom})
    if (to_string(e) == name) return e;
  throw ConfigError("unknown experiment '" + name + "'");
}

std::vector<Scalar> SweepResult::column(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw Error("no column '" + name + "'");
  const auto j = std::distance(columns.begin(), it);
  std::vector<Scalar> out;
  for (const auto& row : rows) {
    if (!std::holds_alternative<Scalar>(row[j]))
      throw Error("column '" + name + "' is not numeric");
    out.push_back(std::get<Scalar>(row[j]));
  }
  return out;
}

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = {
      "medium.nu",          "medium.alpha_l",       "medium.gamma",
      "medium.broadening",  "medium.initial",       "medium.gamma0",
      "medium.transit",     "pulse.shape",          "pulse.bandwidth",
      "pulse.amplitude",    "protocol.direction",   "protocol.storage_time",
      "grid.n_points",      "grid.half_span",       "grid.max_step",
      "delta0.initial_nodes", "delta0.max_nodes",   "delta0.rel_tol",
      "delta0.support_widths", "oracle.dt",         "oracle.n_z",
      "oracle.n_delta0",    "oracle.n_deltap",      "oracle.t_start",
      "oracle.t_end",       "oracle.support_widths", "sweep.alpha_l",
      "sweep.gamma",        "sweep.storage_time",   "sweep.gamma0",
      "decay.initial_depth", "optimize.gamma_min",  "optimize.gamma_max",
      "optimize.scan_points", "optimize.rel_tol",   "validate.eff_tol",
      "validate.l2_tol",    "output.path",          "output.dt"};
  return keys;
}

Scalar nu_for_depth(const KernelContext& kernels, Scalar alpha_l) {
  if (!(alpha_l >= 0) || !std::isfinite(alpha_l))
    throw ConfigError("optical depth must be finite and >= 0");
  const Scalar re = ResponseKernels(kernels).H(0.0).real();
  if (!(re > 0)) throw ConfigError("medium does not absorb at zero detuning");
  return alpha_l / (2 * re);
}

Scalar analytic_efficiency(const MediumSpec& m, Direction d,
                           const PulseSpec& pulse, Scalar storage_time,
                           const FrequencyGrid& grid,
                           const Delta0Settings& settings, Complex amplitude,
                           SolverDiagnostics* diag) {
  PulseSpec p = pulse;
  p.center_time = -storage_time / 2;
  const ProtocolConfig protocol{d, storage_time};
  ComplexSpectrum in = pulse_spectrum(p, grid);
  in.values *= amplitude;
  ComplexSpectrum out;
  if (m.kernels.initial.shape() == Shape::delta) {
    out = d == Direction::backward
              ? backward_output_spectrum(m, protocol, in, settings, diag)
              : forward_output_spectrum(m, protocol, in, settings, diag);
  } else {
    auto input = [&](Scalar w) { return amplitude * pulse_amplitude(p, w); };
    out = output_spectrum(m, protocol, input, grid, settings, diag);
  }
  return efficiency(out, in);
}

BroadeningOptimum optimize_broadening(const MediumSpec& base, Direction d,
                                      const PulseSpec& pulse,
                                      Scalar storage_time, Scalar gamma_lo,
                                      Scalar gamma_hi, int scan_points,
                                      Scalar rel_tol) {
  if (!(gamma_lo > 0) || !(gamma_hi > gamma_lo) || scan_points < 3 ||
      !(rel_tol > 0))
    throw ConfigError("invalid broadening search bracket");
  BroadeningOptimum best;
  auto medium_at = [&](Scalar gamma) {
    MediumSpec m = base;
    m.kernels.broadening = SpectralDistribution::make(
        base.kernels.broadening.shape(), gamma, base.kernels.broadening.center());
    return m;
  };

  std::vector<Scalar> gammas(scan_points), effs(scan_points);
  best.grid_ratio = std::pow(gamma_hi / gamma_lo, 1.0 / (scan_points - 1));
  for (int i = 0; i < scan_points; ++i) {
    gammas[i] = gamma_lo * std::pow(best.grid_ratio, i);
    const MediumSpec m = medium_at(gammas[i]);
    effs[i] = analytic_efficiency(m, d, pulse, storage_time, default_grid(m));
    ++best.evaluations;
  }
  const Index peak = argmax(effs);
  best.grid_gamma = gammas[peak];
  best.grid_efficiency = effs[peak];

  const Scalar slack = 1e-9 * std::max<Scalar>(effs[peak], 1e-300);
  for (Index i = 0; i < peak; ++i)
    if (effs[i + 1] < effs[i] - slack) best.unimodal = false;
  for (Index i = peak; i + 1 < scan_points; ++i)
    if (effs[i + 1] > effs[i] + slack) best.unimodal = false;

  if (!best.unimodal) {
    best.gamma = best.grid_gamma;
    best.efficiency = best.grid_efficiency;
    return best;
  }

  const Scalar lo = gammas[std::max<Index>(peak - 1, 0)];
  const Scalar hi = gammas[std::min<Index>(peak + 1, scan_points - 1)];
  // One grid for the whole refinement keeps the objective smooth in gamma.
  const FrequencyGrid grid = default_grid(medium_at(lo));
  auto objective = [&](Scalar log_gamma) {
    return analytic_efficiency(medium_at(std::exp(log_gamma)), d, pulse,
                               storage_time, grid);
  };
  const auto g = golden_section_maximize<Scalar>(objective, std::log(lo),
                                                 std::log(hi), std::log1p(rel_tol));
  best.evaluations += g.evaluations;
  best.gamma = std::exp(g.x);
  best.efficiency = g.value;
  if (best.grid_efficiency > best.efficiency) {
    best.gamma = best.grid_gamma;
    best.efficiency = best.grid_efficiency;
  }
  return best;
}

SweepResult run_fig1(const Config& user) {
  const Config c = with_defaults(user, {{"medium.initial", "delta"},
                                        {"medium.broadening", "box"},
                                        {"medium.gamma", "100"},
                                        {"sweep.alpha_l", "lin:0:10:101"}});
  SweepResult r = start(Experiment::fig1, c,
                        {"alpha_l", "nu", "gamma", "efficiency_backward",
                         "efficiency_forward", "law_backward", "law_forward",
                         "residual_backward", "residual_forward",
                         "regime_warning"});
  MediumSpec m = medium_from(c);
  if (m.kernels.initial.shape() != Shape::delta ||
      m.kernels.broadening.shape() != Shape::box)
    throw ConfigError("fig1 needs a delta initial line and box broadening");
  const Scalar gamma = m.kernels.broadening.width();
  const bool warn = gamma < 50;
  if (warn)
    r.summary.push_back(printf_string(
        "warning: gamma = %g is outside the wide-broadening regime (>= 50)", gamma));
  const PulseSpec pulse = pulse_from(c);
  const ProtocolConfig protocol = protocol_from(c);
  const FrequencyGrid grid = grid_from(c, m);
  const Delta0Settings settings = settings_from(c);
  const Complex amplitude = amplitude_from(c);

  Scalar worst = 0;
  for (Scalar alpha_l : sorted(c.get_list("sweep.alpha_l", ""))) {
    m.nu = nu_for_depth(m.kernels, alpha_l);
    const Scalar depth = optical_depth(m, 0);
    const Scalar eb = analytic_efficiency(m, Direction::backward, pulse,
                                          protocol.storage_time, grid, settings,
                                          amplitude);
    const Scalar ef = analytic_efficiency(m, Direction::forward, pulse,
                                          protocol.storage_time, grid, settings,
                                          amplitude);
    const Scalar lb = closed_form::backward_law(depth);
    const Scalar lf = closed_form::forward_law(depth);
    worst = std::max({worst, std::abs(eb - lb), std::abs(ef - lf)});
    r.rows.push_back({depth, m.nu, gamma, eb, ef, lb, lf, eb - lb, ef - lf,
                      Scalar(warn ? 1 : 0)});
  }
  const auto fwd = r.column("efficiency_forward");
  const Index k = argmax(fwd);
  r.summary.push_back(printf_string(
      "forward maximum %.6f at alphaL = %.4g; max |residual| vs laws %.3e",
      fwd[k], r.column("alpha_l")[k], worst));
  return r;
}

SweepResult run_fig2(const Config& user, bool top_panel) {
  if (user.has("medium.alpha_l"))
    throw ConfigError("fig2 sweeps gamma at fixed medium.nu; medium.alpha_l is not used");
  const Config c = with_defaults(
      user, {{"medium.initial", "delta"},
             {"medium.broadening", "lorentzian"},
             {"medium.nu", top_panel ? "2" : "0.05"},
             {"sweep.gamma", "log:0.001:100:51"}});
  SweepResult r = start(top_panel ? Experiment::fig2_top : Experiment::fig2_bottom,
                        c,
                        {"gamma", "nu", "alpha_l", "efficiency_backward",
                         "efficiency_forward", "closed_backward",
                         "closed_forward"});
  MediumSpec m = medium_from(c);
  const PulseSpec pulse = pulse_from(c);
  const ProtocolConfig protocol = protocol_from(c);
  const Delta0Settings settings = settings_from(c);
  const Complex amplitude = amplitude_from(c);
  const bool lorentzian_pair = m.kernels.broadening.shape() == Shape::lorentzian &&
                               m.kernels.initial.shape() == Shape::delta &&
                               m.transit == 0;

  for (Scalar gamma : positive_list(c, "sweep.gamma", "")) {
    m.kernels.broadening =
        SpectralDistribution::make(m.kernels.broadening.shape(), gamma);
    const FrequencyGrid grid = grid_from(c, m);
    const Scalar eb = analytic_efficiency(m, Direction::backward, pulse,
                                          protocol.storage_time, grid, settings,
                                          amplitude);
    const Scalar ef = analytic_efficiency(m, Direction::forward, pulse,
                                          protocol.storage_time, grid, settings,
                                          amplitude);
    Scalar cb = nan, cf = nan;
    if (lorentzian_pair) {
      const Scalar nu = m.nu, bw = pulse.bandwidth;
      cb = closed_form_efficiency(grid, [&](Scalar w) {
        return closed_form::lorentzian_backward(nu, gamma, w, bw);
      }, bw);
      cf = closed_form_efficiency(grid, [&](Scalar w) {
        return closed_form::lorentzian_forward(nu, gamma, w, bw);
      }, bw);
    }
    r.rows.push_back({gamma, m.nu, optical_depth(m, 0), eb, ef, cb, cf});
  }
  const auto gammas = r.column("gamma");
  for (const char* name : {"efficiency_backward", "efficiency_forward"}) {
    const auto e = r.column(name);
    const Index k = argmax(e);
    r.summary.push_back(printf_string("%s: maximum %.6f at gamma = %.4g", name,
                                      e[k], gammas[k]));
  }
  return r;
}

SweepResult run_fig4(const Config& user) {
  if (user.has("medium.alpha_l"))
    throw ConfigError("fig4 sweeps gamma at fixed medium.nu; medium.alpha_l is not used");
  if (user.has("medium.broadening"))
    throw ConfigError("fig4 evaluates both broadening shapes; medium.broadening is not used");
  const Config c = with_defaults(user, {{"medium.initial", "delta"},
                                        {"medium.nu", "2"},
                                        {"sweep.gamma", "log:0.01:100:41"}});
  SweepResult r = start(Experiment::fig4, c,
                        {"gamma", "nu", "alpha_l_identical", "alpha_l_different",
                         "efficiency_backward_identical",
                         "efficiency_forward_identical",
                         "efficiency_backward_different",
                         "efficiency_forward_different"});
  MediumSpec m = medium_from(c);
  const PulseSpec pulse = pulse_from(c);
  const ProtocolConfig protocol = protocol_from(c);
  const Delta0Settings settings = settings_from(c);
  const Complex amplitude = amplitude_from(c);

  for (Scalar gamma : positive_list(c, "sweep.gamma", "")) {
    std::vector<Cell> row{gamma, m.nu};
    Scalar effs[4];
    int slot = 0;
    for (Shape shape : {Shape::lorentzian, Shape::box}) {
      m.kernels.broadening = SpectralDistribution::make(shape, gamma);
      row.push_back(optical_depth(m, 0));
      const FrequencyGrid grid = grid_from(c, m);
      for (Direction d : {Direction::backward, Direction::forward})
        effs[slot++] = analytic_efficiency(m, d, pulse, protocol.storage_time,
                                           grid, settings, amplitude);
    }
    for (Scalar e : effs) row.push_back(e);
    r.rows.push_back(std::move(row));
  }
  const auto gammas = r.column("gamma");
  for (const char* d : {"backward", "forward"}) {
    const auto same = r.column(std::string("efficiency_") + d + "_identical");
    const auto diff = r.column(std::string("efficiency_") + d + "_different");
    Scalar crossing = nan;
    for (std::size_t i = 0; i + 1 < same.size(); ++i)
      if ((same[i] - diff[i]) * (same[i + 1] - diff[i + 1]) < 0) {
        crossing = std::sqrt(gammas[i] * gammas[i + 1]);
        break;
      }
    r.summary.push_back(printf_string(
        "%s: identical-shape curve crosses the different-shape curve near gamma = %.4g",
        d, crossing));
  }
  return r;
}

SweepResult run_decay(const Config& user) {
  const Config c = with_defaults(user, {{"medium.initial", "lorentzian"},
                                        {"medium.gamma0", "0.1"},
                                        {"medium.broadening", "box"},
                                        {"medium.gamma", "20"},
                                        {"sweep.storage_time", "lin:30:60:7"},
                                        {"sweep.gamma0", "0.05,0.1,0.2,0.4"},
                                        {"decay.initial_depth", "40"}});
  Config medium_cfg = c;
  if (!c.has("medium.nu") && !c.has("medium.alpha_l"))
    medium_cfg.set("medium.alpha_l", "2");
  SweepResult r = start(Experiment::decay, c,
                        {"kind", "storage_time", "gamma0", "nu", "alpha_l",
                         "efficiency", "storage_factor", "fitted_rate"});
  MediumSpec m = medium_from(medium_cfg);
  const PulseSpec pulse = pulse_from(c);
  const ProtocolConfig protocol = protocol_from(c);
  const Delta0Settings settings = settings_from(c);
  const Complex amplitude = amplitude_from(c);
  const Scalar gamma0 = m.kernels.initial.shape() == Shape::delta
                            ? 0
                            : m.kernels.initial.width();

  std::vector<std::pair<Scalar, Scalar>> points;
  std::vector<std::vector<Cell>> storage_rows;
  const FrequencyGrid grid = grid_from(c, m);
  for (Scalar t : positive_list(c, "sweep.storage_time", "")) {
    ProtocolConfig p = protocol;
    p.storage_time = t;
    p.validate();
    const Scalar eff = analytic_efficiency(m, p.direction, pulse, t, grid,
                                           settings, amplitude);
    points.emplace_back(t, eff);
    storage_rows.push_back({std::string("storage"), t, gamma0, m.nu,
                            optical_depth(m, 0), eff,
                            std::norm(storage_decay_factor(m, t / 2)), nan});
  }
  const Scalar rate = fit_exponential_decay(points);
  for (auto& row : storage_rows) {
    row.back() = rate;
    r.rows.push_back(std::move(row));
  }
  r.summary.push_back(printf_string(
      "fitted decay rate %.6g (initial linewidth %.6g)", rate, gamma0));

  // Trade-off at fixed storage time: a wider initial line at fixed initial
  // optical depth gives more coupling but dephases faster.
  if (m.kernels.initial.shape() != Shape::delta) {
    const Scalar depth0 = c.get_scalar("decay.initial_depth", 40);
    for (Scalar g0 : positive_list(c, "sweep.gamma0", "")) {
      MediumSpec mm = m;
      mm.kernels.initial = SpectralDistribution::make(m.kernels.initial.shape(), g0);
      KernelContext bare{SpectralDistribution::delta(), mm.kernels.initial,
                         EvaluationMode::closed_form};
      mm.nu = nu_for_depth(bare, depth0);
      const Scalar eff =
          analytic_efficiency(mm, protocol.direction, pulse,
                              protocol.storage_time, grid_from(c, mm), settings,
                              amplitude);
      r.rows.push_back({std::string("tradeoff"), protocol.storage_time, g0,
                        mm.nu, optical_depth(mm, 0), eff,
                        std::norm(storage_decay_factor(mm, protocol.storage_time / 2)),
                        nan});
    }
  }
  return r;
}

SweepResult run_optimize(const Config& user) {
  const Config c = with_defaults(user, {{"medium.initial", "delta"},
                                        {"medium.broadening", "lorentzian"},
                                        {"medium.nu", "2"},
                                        {"medium.gamma", "1"},
                                        {"optimize.gamma_min", "0.01"},
                                        {"optimize.gamma_max", "100"},
                                        {"optimize.scan_points", "41"},
                                        {"optimize.rel_tol", "1e-4"}});
  SweepResult r = start(Experiment::optimize, c,
                        {"direction", "nu", "gamma_opt", "efficiency_opt",
                         "alpha_l", "grid_gamma", "grid_efficiency", "unimodal"});
  const MediumSpec m = medium_from(c);
  const ProtocolConfig protocol = protocol_from(c);
  const PulseSpec pulse = pulse_from(c);
  const auto best = optimize_broadening(
      m, protocol.direction, pulse, protocol.storage_time,
      c.get_scalar("optimize.gamma_min", 0), c.get_scalar("optimize.gamma_max", 0),
      c.get_int("optimize.scan_points", 0), c.get_scalar("optimize.rel_tol", 0));
  MediumSpec at = m;
  at.kernels.broadening =
      SpectralDistribution::make(m.kernels.broadening.shape(), best.gamma);
  r.rows.push_back({to_string(protocol.direction), m.nu, best.gamma,
                    best.efficiency, optical_depth(at, 0), best.grid_gamma,
                    best.grid_efficiency, Scalar(best.unimodal ? 1 : 0)});
  const bool consistent = std::abs(std::log(best.gamma / best.grid_gamma)) <=
                          std::log(best.grid_ratio) * (1 + 1e-9);
  r.summary.push_back(printf_string(
      "%s optimum: gamma = %.6g, efficiency = %.6f (%d evaluations)",
      to_string(protocol.direction).c_str(), best.gamma, best.efficiency,
      best.evaluations));
  if (!best.unimodal)
    r.summary.push_back("warning: coarse scan is not unimodal; reporting the scan maximum");
  if (!consistent)
    r.summary.push_back("warning: refined optimum is more than one scan step from the scan maximum");
  return r;
}

SweepResult run_validate(const Config& user) {
  const Config c = with_defaults(user, {{"medium.initial", "delta"},
                                        {"medium.gamma", "20"},
                                        {"sweep.alpha_l", "0.5,2,4"},
                                        {"validate.eff_tol", "0.01"},
                                        {"validate.l2_tol", "0.01"}});
  if (c.has("medium.broadening") || c.has("medium.nu") || c.has("medium.alpha_l"))
    throw ConfigError("validate runs a fixed shape/depth matrix; use sweep.alpha_l and medium.gamma");
  SweepResult r = start(Experiment::validate, c,
                        {"direction", "broadening", "alpha_l", "nu", "gamma",
                         "efficiency_oracle", "efficiency_analytic",
                         "efficiency_difference", "spectrum_l2_error",
                         "energy_balance", "passed"});
  const Scalar eff_tol = c.get_scalar("validate.eff_tol", 0.01);
  const Scalar l2_tol = c.get_scalar("validate.l2_tol", 0.01);
  const PulseSpec pulse = pulse_from(c);
  const Scalar storage_time = c.get_scalar("protocol.storage_time", 30);
  const OracleConfig ocfg = oracle_from(c, storage_time);
  const Delta0Settings settings = settings_from(c);
  const auto depths = sorted(c.get_list("sweep.alpha_l", ""));

  Scalar worst_eff = 0, worst_l2 = 0;
  for (Direction d : {Direction::backward, Direction::forward}) {
    for (const char* shape : {"box", "lorentzian"}) {
      for (Scalar alpha_l : depths) {
        Config point = c;
        point.set("medium.broadening", shape);
        point.set("medium.alpha_l", format_number(alpha_l));
        const MediumSpec m = medium_from(point);
        const ProtocolConfig p{d, storage_time};
        p.validate();

        PulseSpec centred = pulse;
        centred.center_time = -storage_time / 2;
        const FrequencyGrid grid = grid_from(c, m);
        const ComplexSpectrum in = pulse_spectrum(centred, grid);
        const ComplexSpectrum out =
            d == Direction::backward
                ? backward_output_spectrum(m, p, in, settings)
                : forward_output_spectrum(m, p, in, settings);
        const Scalar eff_a = efficiency(out, in);

        std::vector<Cell> row{to_string(d), std::string(shape),
                              optical_depth(m, 0), m.nu,
                              m.kernels.broadening.width()};
        try {
          const OracleRun run = run_oracle(m, p, centred, ocfg);
          const Scalar eff_o = efficiency(run.output, run.input);
          const ComplexSpectrum oracle_out = fourier_transform(run.output, grid);
          const Scalar ref = out.values.norm();
          const Scalar diff = (oracle_out.values - out.values).norm();
          const Scalar l2 = ref > 0 ? diff / ref : diff;
          const Scalar balance =
              (energy(run.transmitted) + run.stored_energy) / energy(run.input);
          const bool ok = std::abs(eff_o - eff_a) < eff_tol && l2 < l2_tol;
          worst_eff = std::max(worst_eff, std::abs(eff_o - eff_a));
          worst_l2 = std::max(worst_l2, l2);
          r.passed = r.passed && ok;
          row.insert(row.end(), {eff_o, eff_a, eff_o - eff_a, l2, balance,
                                 Scalar(ok ? 1 : 0)});
        } catch (const ConfigError& e) {
          r.passed = false;
          r.summary.push_back(std::string("oracle rejected configuration: ") + e.what());
          row.insert(row.end(), {nan, eff_a, nan, nan, nan, Scalar(0)});
        }
        r.rows.push_back(std::move(row));
      }
    }
  }
  r.summary.push_back(printf_string(
      "%s: max |dEff| = %.3e (tol %.3g), max spectral L2 error = %.3e (tol %.3g)",
      r.passed ? "PASS" : "FAIL", worst_eff, eff_tol, worst_l2, l2_tol));
  return r;
}

SweepResult run_custom(const Config& user) {
  const Config c = with_defaults(user, {{"medium.initial", "delta"},
                                        {"medium.broadening", "box"},
                                        {"medium.gamma", "100"}});
  Config medium_cfg = c;
  if (!c.has("medium.nu") && !c.has("medium.alpha_l"))
    medium_cfg.set("medium.alpha_l", "2");
  SweepResult r = start(Experiment::custom, c,
                        {"direction", "nu", "alpha_l", "gamma", "gamma0",
                         "storage_time", "efficiency", "efficiency_time_domain",
                         "shape_fidelity", "peak_time", "delta0_nodes"});
  const MediumSpec m = medium_from(medium_cfg);
  const PulseSpec pulse = pulse_from(c);
  const ProtocolConfig base = protocol_from(c);
  const FrequencyGrid grid = grid_from(c, m);
  const Delta0Settings settings = settings_from(c);
  const Complex amplitude = amplitude_from(c);
  const Scalar dt = c.get_scalar("output.dt", 0.05);
  if (!(dt > 0)) throw ConfigError("'output.dt' must be positive");
  const bool nondelta = m.kernels.initial.shape() != Shape::delta;
  const Scalar gamma0 = nondelta ? m.kernels.initial.width() : 0;
  const Scalar t_max =
      base.storage_time + 10 / pulse.bandwidth + (nondelta ? 10 / gamma0 : 0);

  std::vector<Direction> directions{Direction::backward, Direction::forward};
  if (c.has("protocol.direction")) directions = {base.direction};
  PulseSpec centred = pulse;
  centred.center_time = -base.storage_time / 2;
  ComplexSpectrum in = pulse_spectrum(centred, grid);
  in.values *= amplitude;
  const Index n = static_cast<Index>(std::floor(t_max / dt + 1e-9)) + 1;
  TimeSignal in_signal = pulse_signal(centred, -t_max, dt, n);
  in_signal.values *= amplitude;

  for (Direction d : directions) {
    const ProtocolConfig p{d, base.storage_time};
    SolverDiagnostics diag;
    auto input = [&](Scalar w) { return amplitude * pulse_amplitude(centred, w); };
    const ComplexSpectrum out =
        nondelta ? output_spectrum(m, p, input, grid, settings, &diag)
                 : (d == Direction::backward
                        ? backward_output_spectrum(m, p, in, settings, &diag)
                        : forward_output_spectrum(m, p, in, settings, &diag));
    const TimeSignal out_signal = output_signal(out, t_max, dt);
    Scalar fidelity = 0, peak = nan;
    Scalar eff = efficiency(out, in);
    if (eff > 0) {
      const MemoryReport rep = memory_report(out, in, out_signal, in_signal);
      fidelity = rep.shape_fidelity;
      peak = rep.peak_time;
    }
    r.rows.push_back({to_string(d), m.nu, optical_depth(m, 0),
                      m.kernels.broadening.width(), gamma0, base.storage_time,
                      eff, efficiency(out_signal, in_signal), fidelity, peak,
                      Scalar(diag.delta0_nodes)});
    r.summary.push_back(printf_string(
        "%s: efficiency %.6f, shape fidelity %.6f", to_string(d).c_str(), eff,
        fidelity));
  }
  return r;
}

SweepResult run_experiment(Experiment e, const Config& cfg) {
  switch (e) {
    case Experiment::fig1: return run_fig1(cfg);
    case Experiment::fig2_top: return run_fig2(cfg, true);
    case Experiment::fig2_bottom: return run_fig2(cfg, false);
    case Experiment::fig4: return run_fig4(cfg);
    case Experiment::decay: return run_decay(cfg);
    case Experiment::validate: return run_validate(cfg);
    case Experiment::optimize: return run_optimize(cfg);
    case Experiment::custom: return run_custom(cfg);
  }
  throw ConfigError("unknown experiment");
}

std::string format_number(Scalar v) {
  if (std::isnan(v)) return "nan";
  if (v == 0) v = 0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_csv(std::ostream& out, const SweepResult& r) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, r.config_hash);
  out << "# config_hash=" << hash << " version=" << version
      << " experiment=" << to_string(r.experiment) << "\n";
  for (std::size_t j = 0; j < r.columns.size(); ++j)
    out << (j ? "," : "") << r.columns[j];
  out << "\n";
  for (const auto& row : r.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ",";
      if (const auto* s = std::get_if<std::string>(&row[j]))
        out << *s;
      else
        out << format_number(std::get<Scalar>(row[j]));
    }
    out << "\n";
  }
}

}  // namespace crib
