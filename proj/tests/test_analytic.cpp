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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "crib/analytic.hpp"
#include "crib/metrics.hpp"

using namespace crib;
using SD = SpectralDistribution;

namespace {

// Test-local reference amplitudes, Lorentzian pulse of unit bandwidth.
double pulse(double w) { return (1 / (2 * pi)) / (0.25 + w * w); }

// Wide flat band, backward: the retrieved spectrum is the reflected input
// times -(1 - exp(-d)).
double flat_backward(double depth) { return -(1 - std::exp(-depth)); }

// Wide flat band, forward: -d exp(-d / 2) sinc(w transit).
double flat_forward(double depth, double w, double transit) {
  const double x = w * transit;
  return -depth * std::exp(-depth / 2) * (x == 0 ? 1 : std::sin(x) / x);
}

// Lorentzian broadening of full width g, narrow initial line.
double lorentz_backward(double nu, double g, double w) {
  return pulse(w) * (std::exp(-nu * g / (g * g / 4 + w * w)) - 1);
}
double lorentz_forward(double nu, double g, double w) {
  const double d = g * g / 4 + w * w;
  const double x = nu * w / d;
  return -pulse(w) * (nu * g / d) * std::exp(-nu * g / (2 * d)) *
         (x == 0 ? 1 : std::sin(x) / x);
}

MediumSpec flat_medium(double width, double depth) {
  MediumSpec m;
  m.kernels.initial = SD::delta();
  m.kernels.broadening = SD::box(width);
  m.nu = depth * width / (2 * pi);
  return m;
}

MediumSpec lorentz_medium(double width, double nu) {
  MediumSpec m;
  m.kernels.initial = SD::delta();
  m.kernels.broadening = SD::lorentzian(width);
  m.nu = nu;
  return m;
}

ComplexSpectrum input_for(const FrequencyGrid& grid, double storage_time) {
  PulseSpec p;
  p.center_time = -storage_time / 2;
  return pulse_spectrum(p, grid);
}

// Both outputs carry the phase of a pulse centred at +storage_time / 2.
Complex strip_phase(Complex v, double w, double storage_time) {
  return v * std::exp(Complex(0, -w * storage_time / 2));
}

}  // namespace

TEST_CASE("propagation through the medium") {
  const auto m = flat_medium(100, 1);
  const auto grid = default_grid(m);
  const auto in = input_for(grid, 30);

  MediumSpec empty = m;
  empty.nu = 0;
  CHECK((transmitted_spectrum(empty, in, 1).values - in.values).norm() == 0);

  // Depth 1: in-band energy falls to exp(-1).
  const auto out = transmitted_spectrum(m, in, 1);
  for (Index i = grid.size() / 2; i < grid.size(); i += 400) {
    if (std::abs(grid.omega(i)) >= 45) continue;
    CHECK(std::norm(out.values[i] / in.values[i]) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }
  // Propagating to z1 and then z2 equals propagating to z1 + z2.
  const auto a = transmitted_spectrum(m, transmitted_spectrum(m, in, 0.3), 0.5);
  const auto b = transmitted_spectrum(m, in, 0.8);
  CHECK((a.values - b.values).norm() < 1e-13 * b.values.norm());
}

TEST_CASE("flat wide band reproduces the closed-form outputs") {
  for (double depth : {0.5, 2.0, 6.0}) {
    const auto m = flat_medium(100, depth);
    const auto grid = default_grid(m);
    const auto in = input_for(grid, 30);
    const auto back = backward_output_spectrum(m, {Direction::backward, 30}, in);
    const auto fwd = forward_output_spectrum(m, {Direction::forward, 30}, in);
    for (double w : {0.0, 0.25, 1.0, 3.0, 20.0}) {
      const Index i = std::lround((w + grid.half_span()) / grid.step());
      const double om = grid.omega(i);
      const Complex rb = strip_phase(back.values[i], om, 30) / pulse(om);
      CHECK(std::abs(rb - flat_backward(depth)) < 1e-10);
      // Forward drops the log-dispersion of the band, small for |w| << gamma.
      if (std::abs(om) <= 1) {
        const Complex rf = strip_phase(fwd.values[i], om, 30) / pulse(om);
        CHECK(std::abs(rf - flat_forward(depth, om, 0)) < 1e-4);
      }
    }
  }
}

TEST_CASE("backward efficiency at depth 2") {
  const auto m = flat_medium(100, 2);
  const auto grid = default_grid(m);
  const auto in = input_for(grid, 30);
  const auto out = backward_output_spectrum(m, {Direction::backward, 30}, in);
  CHECK(efficiency(out, in) == doctest::Approx(0.7476).epsilon(2e-4));
}

TEST_CASE("Lorentzian broadening closed forms") {
  for (double nu : {0.05, 0.5, 2.0}) {
    for (double g : {0.3, 1.0, 4.0}) {
      const auto m = lorentz_medium(g, nu);
      const auto grid = FrequencyGrid::symmetric(20, 2001);
      const auto in = input_for(grid, 30);
      const auto back = backward_output_spectrum(m, {Direction::backward, 30}, in);
      const auto fwd = forward_output_spectrum(m, {Direction::forward, 30}, in);
      for (Index i = 0; i < grid.size(); i += 111) {
        const double w = grid.omega(i);
        CHECK(std::abs(strip_phase(back.values[i], w, 30) - lorentz_backward(nu, g, w)) <
              1e-10);
        CHECK(std::abs(strip_phase(fwd.values[i], w, 30) - lorentz_forward(nu, g, w)) <
              1e-10);
      }
    }
  }
}

TEST_CASE("transit time adds a sinc to forward retrieval") {
  auto m = flat_medium(1000, 2);
  m.transit = 0.3;
  const auto grid = FrequencyGrid::covering(20, 0.01, 500);
  const auto in = input_for(grid, 30);
  const auto fwd = forward_output_spectrum(m, {Direction::forward, 30}, in);
  for (double w : {0.0, 0.5, 1.0, 2.0}) {
    const Index i = std::lround((w + grid.half_span()) / grid.step());
    const double om = grid.omega(i);
    CHECK(std::abs(fwd.values[i]) / pulse(om) ==
          doctest::Approx(std::abs(flat_forward(2, om, 0.3))).epsilon(1e-3));
  }
}

TEST_CASE("outputs are linear in the input") {
  MediumSpec m;
  m.kernels.initial = SD::lorentzian(0.1);
  m.kernels.broadening = SD::box(6.0);
  m.nu = 1.5;
  const auto grid = FrequencyGrid::symmetric(6, 121);
  auto in1 = [](Scalar w) { return Complex(1 / (1 + w * w), 0); };
  auto in2 = [](Scalar w) { return std::exp(Complex(-w * w, w)); };
  auto both = [&](Scalar w) { return 2.0 * in1(w) + Complex(0, 1) * in2(w); };
  for (Direction d : {Direction::backward, Direction::forward}) {
    const ProtocolConfig p{d, 30};
    const auto a = output_spectrum(m, p, in1, grid);
    const auto b = output_spectrum(m, p, in2, grid);
    const auto c = output_spectrum(m, p, both, grid);
    CHECK((c.values - 2.0 * a.values - Complex(0, 1) * b.values).norm() <
          1e-5 * c.values.norm());
  }
}

TEST_CASE("symmetric media give even output spectra") {
  const auto m = lorentz_medium(1.3, 0.8);
  const auto grid = FrequencyGrid::symmetric(10, 1001);
  const auto in = input_for(grid, 30);
  for (Direction d : {Direction::backward, Direction::forward}) {
    const auto out = d == Direction::backward
                         ? backward_output_spectrum(m, {d, 30}, in)
                         : forward_output_spectrum(m, {d, 30}, in);
    for (Index i = 0; i < grid.size() / 2; i += 37)
      CHECK(std::abs(out.values[i]) ==
            doctest::Approx(std::abs(out.values[grid.mirror(i)])).epsilon(1e-12));
  }
}

TEST_CASE("forward efficiency never beats its flat-band bound") {
  // d^2 exp(-d) peaks at d = 2 with value 4 exp(-2).
  const double bound = 4 * std::exp(-2.0);
  for (double depth : {0.5, 1.0, 1.8, 2.0, 2.2, 4.0, 9.0}) {
    const auto m = flat_medium(100, depth);
    const auto grid = default_grid(m);
    const auto in = input_for(grid, 30);
    const double eff =
        efficiency(forward_output_spectrum(m, {Direction::forward, 30}, in), in);
    CHECK(eff <= bound + 1e-6);
  }
}

TEST_CASE("efficiency is quadratic in depth for thin media") {
  for (Direction d : {Direction::backward, Direction::forward}) {
    auto eff = [&](double depth) {
      const auto m = flat_medium(100, depth);
      const auto grid = default_grid(m);
      const auto in = input_for(grid, 30);
      const auto out = d == Direction::backward
                           ? backward_output_spectrum(m, {d, 30}, in)
                           : forward_output_spectrum(m, {d, 30}, in);
      return efficiency(out, in);
    };
    const double slope = std::log(eff(1e-2) / eff(1e-3)) / std::log(10.0);
    CHECK(slope == doctest::Approx(2).epsilon(0.025));
  }
}

TEST_CASE("dephasing of the initial line") {
  MediumSpec m = flat_medium(20, 2);
  CHECK(std::abs(storage_decay_factor(m, 30) - 1.0) < 1e-15);
  m.kernels.initial = SD::lorentzian(0.1);
  CHECK(storage_decay_factor(m, 15).real() == doctest::Approx(std::exp(-1.5)).epsilon(1e-14));
  m.kernels.initial = SD::box(0.1);
  CHECK(storage_decay_factor(m, 15).real() ==
        doctest::Approx(std::sin(1.5) / 1.5).epsilon(1e-14));
}

TEST_CASE("narrow initial line approaches the single-line result") {
  PulseSpec p;
  p.center_time = -15;
  MediumSpec narrow = flat_medium(20, 2);
  narrow.kernels.initial = SD::lorentzian(1e-4);
  const MediumSpec single = flat_medium(20, 2);
  const auto grid = default_grid(single);
  const auto in = pulse_spectrum(p, grid);
  SolverDiagnostics diag;
  const auto out = output_spectrum(narrow, {Direction::backward, 30},
                                   [&](Scalar w) { return pulse_amplitude(p, w); },
                                   grid, {}, &diag);
  const auto ref = backward_output_spectrum(single, {Direction::backward, 30}, in);
  CHECK(diag.delta0_nodes > 1);
  CHECK(diag.relative_change < 1e-6);
  // Efficiency falls by the squared dephasing factor at half the storage time.
  CHECK(efficiency(out, in) / efficiency(ref, in) ==
        doctest::Approx(std::norm(storage_decay_factor(narrow, 15))).epsilon(1e-5));
}

TEST_CASE("initial-line quadrature reports non-convergence") {
  MediumSpec m = flat_medium(20, 2);
  m.kernels.initial = SD::lorentzian(0.1);
  Delta0Settings s;
  s.initial_nodes = 9;
  s.max_nodes = 33;
  s.rel_tol = 1e-12;
  PulseSpec p;
  p.center_time = -15;
  const auto grid = FrequencyGrid::symmetric(20, 401);
  try {
    output_spectrum(m, {Direction::backward, 30},
                    [&](Scalar w) { return pulse_amplitude(p, w); }, grid, s);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.achieved() > s.rel_tol);
  }
}

TEST_CASE("retrieved pulse is the undistorted time reverse of the input") {
  const auto m = flat_medium(400, 3);
  const auto grid = default_grid(m, 0.01, 200);
  const auto in = input_for(grid, 30);
  const auto out = backward_output_spectrum(m, {Direction::backward, 30}, in);
  const auto signal = output_signal(out, 40, 0.01);
  PulseSpec echo;
  echo.center_time = 15;
  auto expected = pulse_signal(echo, signal.t_min, signal.dt, signal.size());
  expected.values *= flat_backward(3);
  const double err = (signal.values - expected.values).norm() / expected.values.norm();
  CHECK(err < 1e-3);
}

TEST_CASE("protocol validation") {
  CHECK_THROWS_AS((ProtocolConfig{Direction::backward, 5}.validate()), ConfigError);
  CHECK_NOTHROW((ProtocolConfig{Direction::forward, 10}.validate()));
  CHECK_THROWS_AS(direction_from_string("sideways"), ConfigError);
  CHECK(direction_from_string(to_string(Direction::forward)) == Direction::forward);
  const auto m = flat_medium(100, 2);
  const auto grid = default_grid(m);
  const auto in = input_for(grid, 30);
  CHECK_THROWS_AS(backward_output_spectrum(m, {Direction::backward, 4}, in), ConfigError);
}
