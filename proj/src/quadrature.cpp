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

#include "crib/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace crib {

namespace {

GaussLegendre compute_rule(int n) {
  GaussLegendre rule{RealVector(n), RealVector(n)};
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on the three-term recurrence.
    Scalar x = std::cos(pi * (i + 0.75) / (n + 0.5));
    Scalar dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Scalar p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      const Scalar step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    Scalar p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    const Scalar w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0;
  return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: need at least one node");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    if (n == 1)
      slot = std::make_unique<GaussLegendre>(
          GaussLegendre{RealVector::Zero(1), RealVector::Constant(1, 2.0)});
    else
      slot = std::make_unique<GaussLegendre>(compute_rule(n));
  }
  return *slot;
}

QuadratureRule composite_gauss_legendre(Scalar a, Scalar b, int panels,
                                        int order) {
  if (panels < 1 || order < 1 || !(b > a))
    throw ConfigError("composite_gauss_legendre: invalid panel layout");
  const auto& base = gauss_legendre(order);
  QuadratureRule rule{RealVector(panels * order), RealVector(panels * order)};
  const Scalar width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const Scalar center = a + (p + 0.5) * width;
    rule.nodes.segment(p * order, order) =
        (center + 0.5 * width * base.nodes.array()).matrix();
    rule.weights.segment(p * order, order) = 0.5 * width * base.weights;
  }
  return rule;
}

}  // namespace crib
