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

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "crib/common.hpp"

namespace crib {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  RealVector nodes;
  RealVector weights;
};

/// Returns the n-point rule. Rules are computed once per n and cached.
const GaussLegendre& gauss_legendre(int n);

/// Nodes and weights of a one-dimensional rule on the real line.
struct QuadratureRule {
  RealVector nodes;
  RealVector weights;

  Index size() const { return nodes.size(); }
};

/// Composite Gauss-Legendre rule on [a, b] with `panels` equal panels of
/// `order` nodes each.
QuadratureRule composite_gauss_legendre(Scalar a, Scalar b, int panels,
                                        int order = 8);

template <typename T>
struct IntegrationResult {
  T value{};
  Scalar error = 0;
  int evaluations = 0;
};

namespace detail {

inline constexpr std::array<Scalar, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<Scalar, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kronrod_nodes[1], [3], [5], [7].
inline constexpr std::array<Scalar, 4> gauss7_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T, typename F>
void gk15(F& f, Scalar a, Scalar b, T& kronrod, Scalar& err) {
  const Scalar center = 0.5 * (a + b);
  const Scalar half = 0.5 * (b - a);
  T fc = f(center);
  T k = fc * kronrod_weights[7];
  T g = fc * gauss7_weights[3];
  for (int j = 0; j < 7; ++j) {
    const Scalar dx = half * kronrod_nodes[j];
    const T sum = f(center - dx) + f(center + dx);
    k += sum * kronrod_weights[j];
    if (j % 2 == 1) g += sum * gauss7_weights[j / 2];
  }
  kronrod = k * half;
  err = std::abs(kronrod - g * half);
}

template <typename T, typename F>
void adaptive_step(F& f, Scalar a, Scalar b, Scalar tol, int depth,
                   IntegrationResult<T>& acc) {
  T value;
  Scalar err;
  gk15<T>(f, a, b, value, err);
  acc.evaluations += 15;
  if (err <= tol || depth <= 0 || std::abs(b - a) < 1e-14 * (1 + std::abs(a))) {
    acc.value += value;
    acc.error += err;
    return;
  }
  const Scalar mid = 0.5 * (a + b);
  adaptive_step<T>(f, a, mid, 0.5 * tol, depth - 1, acc);
  adaptive_step<T>(f, mid, b, 0.5 * tol, depth - 1, acc);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b]. The interval
/// is first split at the given breakpoints (those outside (a, b) are
/// ignored). T is Scalar or Complex.
template <typename T, typename F>
IntegrationResult<T> integrate_adaptive(F&& f, Scalar a, Scalar b,
                                        Scalar abs_tol,
                                        std::span<const Scalar> breakpoints = {},
                                        int max_depth = 40) {
  std::vector<Scalar> cuts{a};
  for (Scalar p : breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  IntegrationResult<T> acc;
  const Scalar per_piece = abs_tol / static_cast<Scalar>(cuts.size() - 1);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] > cuts[i])
      detail::adaptive_step<T>(f, cuts[i], cuts[i + 1], per_piece, max_depth,
                               acc);
  }
  return acc;
}

/// Integral of f over [a, +inf) via the substitution u = a + s (1 - v) / v.
template <typename T, typename F>
IntegrationResult<T> integrate_to_infinity(F&& f, Scalar a, Scalar scale,
                                           Scalar abs_tol) {
  auto mapped = [&](Scalar v) -> T {
    if (v <= 0) return T{};
    const Scalar u = a + scale * (1 - v) / v;
    return f(u) * (scale / (v * v));
  };
  return integrate_adaptive<T>(mapped, 0.0, 1.0, abs_tol);
}

}  // namespace crib
