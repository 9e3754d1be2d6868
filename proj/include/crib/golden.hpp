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

#include <cmath>
#include <utility>

namespace crib {

template <typename Scalar>
struct GoldenResult {
  Scalar x;
  Scalar value;
  int evaluations;
};

// Maximizes a unimodal f on [a, b] until the bracket is narrower than tol.
template <typename Scalar, typename F>
GoldenResult<Scalar> golden_section_maximize(F&& f, Scalar a, Scalar b,
                                             Scalar tol, int max_iter = 200) {
  const Scalar r = (std::sqrt(Scalar(5)) - 1) / 2;
  if (b < a) std::swap(a, b);
  Scalar c = b - r * (b - a), d = a + r * (b - a);
  Scalar fc = f(c), fd = f(d);
  int evals = 2;
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  return fc >= fd ? GoldenResult<Scalar>{c, fc, evals}
                  : GoldenResult<Scalar>{d, fd, evals};
}

}  // namespace crib
