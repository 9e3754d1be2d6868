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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "crib/sweep.hpp"

using namespace crib;

namespace {

Config config(std::initializer_list<std::pair<const char*, const char*>> kv) {
  Config c;
  for (const auto& [k, v] : kv) c.set(k, v);
  return c;
}

std::string csv(const SweepResult& r) {
  std::ostringstream os;
  write_csv(os, r);
  return os.str();
}

std::size_t argmax(const std::vector<Scalar>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Every efficiency-like column lies in [0, 1].
void check_efficiencies_bounded(const SweepResult& r) {
  for (const auto& name : r.columns) {
    if (name.rfind("efficiency", 0) != 0 || name == "efficiency_difference") continue;
    for (Scalar e : r.column(name)) {
      if (std::isnan(e)) continue;
      CHECK(e >= 0);
      CHECK(e <= 1);
    }
  }
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream text(
      "# comment line\n"
      "medium.nu = 2   # trailing comment\n"
      "\n"
      "  pulse.bandwidth=1.5\n"
      "medium.nu = 3\n");
  const Config c = Config::parse(text);
  CHECK(c.get_scalar("medium.nu", 0) == 3);
  CHECK(c.get_scalar("pulse.bandwidth", 0) == 1.5);
  CHECK(c.get_scalar("medium.gamma", 7) == 7);
  CHECK(c.get_string("protocol.direction", "backward") == "backward");

  std::istringstream bad("medium.nu 2\n");
  CHECK_THROWS_AS(Config::parse(bad), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/file.cfg"), ConfigError);
  Config d;
  CHECK_THROWS_AS(d.assign("novalue"), ConfigError);
  d.assign("medium.gamma=abc");
  CHECK_THROWS_AS(d.get_scalar("medium.gamma", 0), ConfigError);
  d.assign("grid.n_points=2.5");
  CHECK_THROWS_AS(d.get_int("grid.n_points", 0), ConfigError);
}

TEST_CASE("parameter lists") {
  CHECK(parse_list("0.5, 1,2") == std::vector<Scalar>{0.5, 1, 2});
  const auto lin = parse_list("lin:0:10:101");
  REQUIRE(lin.size() == 101);
  CHECK(lin[20] == doctest::Approx(2));
  CHECK(lin.back() == 10);
  const auto log = parse_list("log:0.001:100:51");
  REQUIRE(log.size() == 51);
  CHECK(log.front() == doctest::Approx(0.001));
  CHECK(log[30] == doctest::Approx(1));
  CHECK(log.back() == doctest::Approx(100));
  CHECK_THROWS_AS(parse_list("log:0:1:5"), ConfigError);
  CHECK_THROWS_AS(parse_list("lin:0:1"), ConfigError);
  CHECK_THROWS_AS(parse_list(""), ConfigError);
  CHECK_THROWS_AS(parse_list("1,x"), ConfigError);
  // Ranges and single values mix.
  CHECK(parse_list("lin:0:1:3, 5") == std::vector<Scalar>{0, 0.5, 1, 5});
}

TEST_CASE("config hash") {
  const auto a = config({{"medium.nu", "2"}, {"medium.gamma", "3"}});
  const auto b = config({{"medium.gamma", "3"}, {"medium.nu", "2"}});
  CHECK(a.hash() == b.hash());
  auto c = a;
  c.set("output.path", "elsewhere.csv");
  CHECK(c.hash() == a.hash());
  c.set("medium.nu", "2.5");
  CHECK(c.hash() != a.hash());
}

TEST_CASE("unknown keys and experiment names") {
  CHECK_THROWS_AS(run_fig1(config({{"medium.bogus", "1"}})), ConfigError);
  CHECK_THROWS_AS(experiment_from_string("fig3"), ConfigError);
  CHECK(experiment_from_string(to_string(Experiment::fig2_top)) == Experiment::fig2_top);
  const auto& keys = known_config_keys();
  CHECK(std::find(keys.begin(), keys.end(), "oracle.dt") != keys.end());
}

TEST_CASE("fig1 rows") {
  const auto r = run_fig1(config({{"sweep.alpha_l", "10,0,2"}}));
  REQUIRE(r.rows.size() == 3);
  const auto depth = r.column("alpha_l");
  CHECK(std::is_sorted(depth.begin(), depth.end()));
  const auto back = r.column("efficiency_backward");
  const auto fwd = r.column("efficiency_forward");
  CHECK(back[0] == 0);
  CHECK(fwd[0] == 0);
  CHECK(back[1] == doctest::Approx(0.7476).epsilon(0.005 / 0.7476));
  CHECK(fwd[1] == doctest::Approx(0.5413).epsilon(0.005 / 0.5413));
  CHECK(back[2] >= 0.9999);
  for (Scalar res : r.column("residual_backward")) CHECK(std::abs(res) < 5e-3);
  for (Scalar res : r.column("residual_forward")) CHECK(std::abs(res) < 5e-3);
  for (Scalar w : r.column("regime_warning")) CHECK(w == 0);
  check_efficiencies_bounded(r);

  const auto narrow = run_fig1(config({{"sweep.alpha_l", "1"}, {"medium.gamma", "20"}}));
  CHECK(narrow.column("regime_warning")[0] == 1);
  CHECK(narrow.summary.front().find("warning") != std::string::npos);
}

TEST_CASE("fig2 properties") {
  const auto top = run_fig2(config({{"sweep.gamma", "log:0.001:100:51,0.0001,10000"}}), true);
  const auto gamma = top.column("gamma");
  CHECK(std::is_sorted(gamma.begin(), gamma.end()));
  const auto back = top.column("efficiency_backward");
  const auto fwd = top.column("efficiency_forward");
  const double sup_b = *std::max_element(back.begin(), back.end());
  const double sup_f = *std::max_element(fwd.begin(), fwd.end());
  CHECK(sup_b > 0.95);
  CHECK(sup_b > sup_f);
  // Both curves vanish at the ends of the range. For narrow broadening only
  // |w| below sqrt(nu gamma) is absorbed, so backward retrieval fades like
  // sqrt(gamma): a decade in gamma costs a factor ~sqrt(10). Forward
  // retrieval is also reabsorbed by the growing depth and falls faster.
  CHECK(back[0] < 0.05);
  CHECK(back[0] / back[1] == doctest::Approx(1 / std::sqrt(10.0)).epsilon(0.2));
  CHECK(fwd[0] < 0.01);
  CHECK(fwd[0] / fwd[1] < 0.1);
  for (std::size_t i = 1; i < 10; ++i) {
    CHECK(back[i] < back[i + 1]);
    CHECK(fwd[i] < fwd[i + 1]);
  }
  // Wide broadening: depth 4 nu / gamma, efficiency ~ depth^2.
  CHECK(back.back() < 1e-6);
  CHECK(fwd.back() < 1e-6);
  // Optimum of the order of the pulse bandwidth.
  CHECK(gamma[argmax(back)] > 0.1);
  CHECK(gamma[argmax(back)] < 10);
  CHECK(gamma[argmax(fwd)] > 0.1);
  CHECK(gamma[argmax(fwd)] < 10);
  // The solver reproduces the closed forms for this pairing.
  const auto cb = top.column("closed_backward");
  const auto cf = top.column("closed_forward");
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i] == doctest::Approx(cb[i]).epsilon(1e-6).scale(1e-12));
    CHECK(fwd[i] == doctest::Approx(cf[i]).epsilon(1e-6).scale(1e-12));
  }
  check_efficiencies_bounded(top);

  const auto bottom = run_fig2(Config{}, false);
  const auto g2 = bottom.column("gamma");
  CHECK(g2[argmax(bottom.column("efficiency_backward"))] < 1);
  CHECK(g2[argmax(bottom.column("efficiency_forward"))] < 1);
  CHECK_THROWS_AS(run_fig2(config({{"medium.alpha_l", "2"}}), true), ConfigError);
}

TEST_CASE("fig4 crossover") {
  const auto r = run_fig4(config({{"sweep.gamma", "log:0.01:100:21,10000"}}));
  for (const char* d : {"backward", "forward"}) {
    const auto same = r.column(std::string("efficiency_") + d + "_identical");
    const auto diff = r.column(std::string("efficiency_") + d + "_different");
    CHECK(same.front() > diff.front());
    CHECK(same[same.size() - 2] < diff[diff.size() - 2]);
    // Thin-medium limit: efficiency ~ depth^2 with depth 4 nu / gamma
    // (Lorentzian) or 2 pi nu / gamma (box).
    const double depth_same = 8e-4, depth_diff = 2 * pi * 2 / 1e4;
    CHECK(same.back() < 1.1 * depth_same * depth_same);
    CHECK(diff.back() < 1.1 * depth_diff * depth_diff);
  }
  check_efficiencies_bounded(r);
  CHECK_THROWS_AS(run_fig4(config({{"medium.broadening", "box"}})), ConfigError);
}

TEST_CASE("storage decay") {
  const auto r = run_decay(Config{});
  const auto rate = r.column("fitted_rate");
  CHECK(rate.front() == doctest::Approx(0.1).epsilon(0.02));

  // Trade-off rows: a wider initial line at fixed initial depth absorbs
  // more but keeps less.
  std::vector<Scalar> depth, factor;
  const auto alpha = r.column("alpha_l");
  const auto storage = r.column("storage_factor");
  for (std::size_t i = 0; i < r.rows.size(); ++i)
    if (std::get<std::string>(r.rows[i][0]) == "tradeoff") {
      depth.push_back(alpha[i]);
      factor.push_back(storage[i]);
    }
  REQUIRE(depth.size() == 4);
  CHECK(std::is_sorted(depth.begin(), depth.end()));
  CHECK(std::is_sorted(factor.rbegin(), factor.rend()));
  CHECK(depth.front() < depth.back());
  CHECK(factor.front() > factor.back());
  check_efficiencies_bounded(r);

  const auto flat = run_decay(config({{"medium.initial", "delta"},
                                      {"sweep.storage_time", "lin:30:60:5"}}));
  CHECK(std::abs(flat.column("fitted_rate").front()) < 1e-9);
  CHECK(flat.rows.size() == 5);
}

TEST_CASE("broadening optimum") {
  const auto back = run_optimize(config({{"protocol.direction", "backward"}}));
  const double g_back = back.column("gamma_opt")[0];
  CHECK(back.column("efficiency_opt")[0] >= 0.95);
  CHECK(back.column("unimodal")[0] == 1);

  const auto fwd = run_optimize(config({{"protocol.direction", "forward"}}));
  CHECK(fwd.column("efficiency_opt")[0] <= 4 * std::exp(-2.0) + 0.01);

  const auto weak = run_optimize(config({{"medium.nu", "1e-6"}}));
  CHECK(weak.column("efficiency_opt")[0] < 0.01);

  // Within one step of the fig2 grid maximum.
  const auto fig2 = run_fig2(Config{}, true);
  const auto gamma = fig2.column("gamma");
  const double grid_best = gamma[argmax(fig2.column("efficiency_backward"))];
  const double step = gamma[1] / gamma[0];
  CHECK(std::abs(std::log(g_back / grid_best)) <= std::log(step) * (1 + 1e-9));
}

TEST_CASE("validation suite edge cases") {
  // Zero depth: no coupling, both paths give exactly nothing.
  const auto zero = run_validate(config({{"sweep.alpha_l", "0"}}));
  REQUIRE(zero.rows.size() == 4);
  CHECK(zero.passed);
  for (Scalar e : zero.column("efficiency_oracle")) CHECK(e == 0);
  for (Scalar e : zero.column("efficiency_analytic")) CHECK(e == 0);

  // Ten times the default step violates the oracle's resolution contract.
  const auto coarse = run_validate(config({{"oracle.dt", "0.01"}}));
  CHECK_FALSE(coarse.passed);
  REQUIRE(coarse.rows.size() == 12);
  for (Scalar e : coarse.column("efficiency_oracle")) CHECK(std::isnan(e));
  for (Scalar p : coarse.column("passed")) CHECK(p == 0);

  CHECK_THROWS_AS(run_validate(config({{"medium.nu", "1"}})), ConfigError);
}

TEST_CASE("custom runs") {
  const auto r = run_custom(config({{"sweep.alpha_l", "2"}}));
  REQUIRE(r.rows.size() == 2);
  const auto eff = r.column("efficiency");
  CHECK(eff[0] == doctest::Approx(0.7476).epsilon(0.005 / 0.7476));
  CHECK(eff[1] == doctest::Approx(0.5413).epsilon(0.005 / 0.5413));
  for (Scalar f : r.column("shape_fidelity")) CHECK(f >= 0.999);
  for (Scalar t : r.column("peak_time")) CHECK(t == doctest::Approx(15).epsilon(0.01));
  check_efficiencies_bounded(r);

  const auto one = run_custom(config({{"protocol.direction", "forward"}}));
  REQUIRE(one.rows.size() == 1);
  CHECK(std::get<std::string>(one.rows[0][0]) == "forward");
}

TEST_CASE("input amplitude does not change efficiencies") {
  const auto base = run_fig1(config({{"sweep.alpha_l", "0.5,2,6"}}));
  const auto loud = run_fig1(config({{"sweep.alpha_l", "0.5,2,6"}, {"pulse.amplitude", "1000"}}));
  for (const char* name : {"efficiency_backward", "efficiency_forward"}) {
    const auto a = base.column(name), b = loud.column(name);
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(std::abs(a[i] - b[i]) <= 1e-12 * a[i]);
  }
}

TEST_CASE("CSV output") {
  const auto cfg = config({{"sweep.alpha_l", "0,1,2"}});
  const std::string first = csv(run_fig1(cfg));
  CHECK(first == csv(run_fig1(cfg)));

  std::istringstream lines(first);
  std::string meta, header, row;
  std::getline(lines, meta);
  std::getline(lines, header);
  CHECK(meta.rfind("# config_hash=", 0) == 0);
  CHECK(meta.find(std::string("version=") + version) != std::string::npos);
  CHECK(meta.find("experiment=fig1") != std::string::npos);
  CHECK(header.rfind("alpha_l,nu,gamma,efficiency_backward", 0) == 0);
  int count = 0;
  while (std::getline(lines, row)) {
    ++count;
    CHECK(std::count(row.begin(), row.end(), ',') ==
          std::count(header.begin(), header.end(), ','));
  }
  CHECK(count == 3);

  CHECK(format_number(0.123456789123) == "0.123456789");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(1e-20) == "1e-20");
}
