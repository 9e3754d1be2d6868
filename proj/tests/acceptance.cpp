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

// Acceptance run: one PASS/FAIL line per criterion, each including its
// runtime budget. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "crib/golden.hpp"
#include "crib/metrics.hpp"
#include "crib/sweep.hpp"

using namespace crib;
using SD = SpectralDistribution;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

Config config(std::initializer_list<std::pair<const char*, const char*>> kv) {
  Config c;
  for (const auto& [k, v] : kv) c.set(k, v);
  return c;
}

std::size_t argmax(const std::vector<Scalar>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::string csv(const SweepResult& r) {
  std::ostringstream os;
  write_csv(os, r);
  return os.str();
}

MediumSpec flat_medium(double depth) {
  MediumSpec m;
  m.kernels.initial = SD::delta();
  m.kernels.broadening = SD::box(100);
  m.nu = nu_for_depth(m.kernels, depth);
  return m;
}

Outcome backward_law() {
  double worst = 0;
  for (double depth : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const auto m = flat_medium(depth);
    const double eff = analytic_efficiency(m, Direction::backward, PulseSpec{}, 30,
                                           default_grid(m));
    const double law = std::pow(1 - std::exp(-depth), 2);
    worst = std::max(worst, std::abs(eff - law));
  }
  return {worst < 5e-3, format("max |Eff - (1-exp(-aL))^2| = %.2e over aL in {0.5,1,2,4,8}", worst)};
}

Outcome forward_maximum() {
  const auto scan = run_fig1(config({{"sweep.alpha_l", "lin:0:10:101"}}));
  const auto depth = scan.column("alpha_l");
  const auto eff = scan.column("efficiency_forward");
  const std::size_t k = argmax(eff);
  const double lo = depth[std::max<std::size_t>(k, 1) - 1];
  const double hi = depth[std::min(k + 1, depth.size() - 1)];
  auto objective = [](double a) {
    const auto m = flat_medium(a);
    return analytic_efficiency(m, Direction::forward, PulseSpec{}, 30, default_grid(m));
  };
  const auto best = golden_section_maximize<Scalar>(objective, lo, hi, 1e-4);
  const bool ok = std::abs(best.x - 2.0) <= 0.05 && std::abs(best.value - 0.541) <= 0.005;
  return {ok, format("forward peak %.6f at aL = %.4f (scan: %.6f at %.2f)", best.value,
                     best.x, eff[k], depth[k])};
}

Outcome oracle_equivalence() {
  const auto r = run_validate(Config{});
  double worst_eff = 0, worst_l2 = 0;
  for (Scalar d : r.column("efficiency_difference")) worst_eff = std::max(worst_eff, std::abs(d));
  for (Scalar e : r.column("spectrum_l2_error")) worst_l2 = std::max(worst_l2, e);
  const bool ok = r.passed && r.rows.size() == 12 && worst_eff < 0.01 && worst_l2 < 1e-2;
  return {ok, format("%zu points, max |dEff| = %.2e, max L2 = %.2e", r.rows.size(),
                     worst_eff, worst_l2)};
}

Outcome plemelj() {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> pick(-6, 6);
  struct Case {
    const char* name;
    SD g;
  };
  const std::vector<Case> shapes{
      {"lorentzian", SD::lorentzian(1.7, 0.2)},
      {"box", SD::box(5.0, -0.3)},
      {"tabulated", SD::tabulated({-3, -1, 0.5, 2.5}, {0, 0.8, 0.3, 0})}};
  double worst_re = 0;
  for (const auto& s : shapes) {
    const KernelContext ctx{SD::delta(), s.g, EvaluationMode::closed_form};
    for (int i = 0; i < 50; ++i) {
      const double w = pick(rng);
      const double g = eval_density(s.g, w);
      const double re = kernel_H(ctx, w).real();
      const double err = g > 0 ? std::abs(re - pi * g) / (pi * g) : std::abs(re);
      worst_re = std::max(worst_re, err);
    }
  }
  double worst_f = 0;
  for (const SD& g : {SD::lorentzian(1.3), SD::box(4.0)}) {
    const ResponseKernels k({SD::delta(), g, EvaluationMode::closed_form});
    for (int i = 0; i < 50; ++i) {
      const double w = pick(rng);
      worst_f = std::max(worst_f, std::abs(k.F(w) - k.H(w)));
    }
  }
  return {worst_re < 1e-6 && worst_f < 1e-8,
          format("max rel |Re H - pi G| = %.1e (3 shapes x 50 points), max |F - H| = %.1e",
                 worst_re, worst_f)};
}

Outcome no_distortion() {
  const auto r = run_custom(config({{"medium.alpha_l", "2"}}));
  const auto fid = r.column("shape_fidelity");
  const bool ok = fid.size() == 2 && fid[0] >= 0.999 && fid[1] >= 0.999;
  return {ok, format("shape fidelity backward %.6f, forward %.6f", fid[0], fid[1])};
}

Outcome storage_decay() {
  const auto r = run_decay(Config{});
  const double rate = r.column("fitted_rate").front();
  return {std::abs(rate / 0.1 - 1) < 0.02,
          format("fitted rate %.6f for initial linewidth 0.1", rate)};
}

Outcome fig2() {
  const auto top = run_fig2(config({{"sweep.gamma", "log:0.001:100:51,0.0001,10000"}}), true);
  const auto b = top.column("efficiency_backward");
  const auto f = top.column("efficiency_forward");
  const double sup_b = *std::max_element(b.begin(), b.end());
  const double sup_f = *std::max_element(f.begin(), f.end());
  // Narrow end: efficiencies fall monotonically towards gamma -> 0; wide end:
  // efficiency ~ depth^2 -> 0.
  bool narrow = b[0] < 0.05 * sup_b && f[0] < 0.05 * sup_f;
  for (std::size_t i = 0; i < 10; ++i) narrow = narrow && b[i] < b[i + 1] && f[i] < f[i + 1];
  const bool wide = b.back() < 1e-6 && f.back() < 1e-6;
  const auto bottom = run_fig2(Config{}, false);
  const auto g = bottom.column("gamma");
  const double gb = g[argmax(bottom.column("efficiency_backward"))];
  const double gf = g[argmax(bottom.column("efficiency_forward"))];
  const bool ok = sup_b > 0.95 && sup_b > sup_f && narrow && wide && gb < 1 && gf < 1;
  return {ok, format("nu=2: sup back %.4f, sup fwd %.4f, Eff(1e-4) = %.3f/%.4f, "
                     "Eff(1e4) = %.1e/%.1e; nu=0.05: argmax %.3g/%.3g",
                     sup_b, sup_f, b.front(), f.front(), b.back(), f.back(), gb, gf)};
}

Outcome fig4() {
  const auto r = run_fig4(Config{});
  const auto gamma = r.column("gamma");
  bool ok = true;
  std::string detail;
  for (const char* d : {"backward", "forward"}) {
    const auto same = r.column(std::string("efficiency_") + d + "_identical");
    const auto diff = r.column(std::string("efficiency_") + d + "_different");
    ok = ok && same.front() > diff.front() && same.back() < diff.back();
    double cross = std::nan("");
    for (std::size_t i = 0; i + 1 < same.size(); ++i)
      if ((same[i] - diff[i]) * (same[i + 1] - diff[i + 1]) < 0) {
        cross = std::sqrt(gamma[i] * gamma[i + 1]);
        break;
      }
    detail += format("%s crossover near gamma = %.3g; ", d, cross);
  }
  return {ok, detail + "identical wins at small gamma, different at large"};
}

Outcome linearity_and_determinism() {
  const auto base_cfg = config({{"sweep.alpha_l", "0.5,2,6"}});
  auto loud_cfg = base_cfg;
  loud_cfg.set("pulse.amplitude", "1000");
  double worst = 0;
  const auto a = run_fig1(base_cfg), b = run_fig1(loud_cfg);
  for (const char* name : {"efficiency_backward", "efficiency_forward"}) {
    const auto x = a.column(name), y = b.column(name);
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]) / x[i]);
  }
  const auto c2 = config({{"sweep.gamma", "0.1,1,10"}});
  const auto fa = run_fig2(c2, true);
  auto c2_loud = c2;
  c2_loud.set("pulse.amplitude", "1000");
  const auto fb = run_fig2(c2_loud, true);
  for (const char* name : {"efficiency_backward", "efficiency_forward"}) {
    const auto x = fa.column(name), y = fb.column(name);
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]) / x[i]);
  }
  const bool same_csv = csv(a) == csv(run_fig1(base_cfg)) && csv(fa) == csv(run_fig2(c2, true));
  return {worst <= 1e-12 && same_csv,
          format("max relative change under x1e3 amplitude %.1e; repeated CSV %s", worst,
                 same_csv ? "byte-identical" : "DIFFERS")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "backward law", 10, backward_law},
      {2, "forward maximum", 10, forward_maximum},
      {3, "oracle equivalence", 300, oracle_equivalence},
      {4, "Plemelj properties", 5, plemelj},
      {5, "no distortion", 30, no_distortion},
      {6, "storage decay", 60, storage_decay},
      {7, "fig2 reproduction", 60, fig2},
      {8, "fig4 crossover", 60, fig4},
      {9, "linearity and determinism", 10, linearity_and_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = o.ok && s < c.budget_s;
    failures += ok ? 0 : 1;
    std::printf("[%s] criterion %d: %s -- %s (%.1f s, budget %.0f s)\n", ok ? "PASS" : "FAIL",
                c.id, c.name, o.detail.c_str(), s, c.budget_s);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
