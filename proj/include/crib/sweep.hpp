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

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "crib/analytic.hpp"
#include "crib/config.hpp"
#include "crib/oracle.hpp"

namespace crib {

inline constexpr const char* version = "0.1.0";

enum class Experiment {
  fig1,
  fig2_top,
  fig2_bottom,
  fig4,
  decay,
  validate,
  optimize,
  custom
};

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);

using Cell = std::variant<Scalar, std::string>;

struct SweepResult {
  Experiment experiment = Experiment::custom;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  // Human-readable lines for stdout.
  std::vector<std::string> summary;
  // False when a validation tolerance failed.
  bool passed = true;
  // Hash of the effective configuration (defaults + overrides).
  std::uint64_t config_hash = 0;

  /// Numeric column by name; throws Error if absent or non-numeric.
  std::vector<Scalar> column(const std::string& name) const;
};

/// Every key the experiments understand.
const std::vector<std::string>& known_config_keys();

/// Coupling that gives optical depth alpha_l at zero detuning.
Scalar nu_for_depth(const KernelContext& kernels, Scalar alpha_l);

/// Spectral efficiency of the analytic solution for a pulse centred at
/// -storage_time / 2 on the given grid, input scaled by `amplitude`.
Scalar analytic_efficiency(const MediumSpec& m, Direction d,
                           const PulseSpec& pulse, Scalar storage_time,
                           const FrequencyGrid& grid,
                           const Delta0Settings& settings = {},
                           Complex amplitude = 1.0,
                           SolverDiagnostics* diag = nullptr);

struct BroadeningOptimum {
  Scalar gamma = 0;
  Scalar efficiency = 0;
  Scalar grid_gamma = 0;       // best point of the coarse scan
  Scalar grid_efficiency = 0;
  Scalar grid_ratio = 1;       // ratio between neighbouring scan points
  bool unimodal = true;
  int evaluations = 0;
};

/// Coarse geometric scan of the broadening width over [gamma_lo, gamma_hi],
/// then golden-section refinement in log(gamma) to relative tolerance
/// rel_tol. A non-unimodal scan falls back to the scan maximum.
BroadeningOptimum optimize_broadening(const MediumSpec& base, Direction d,
                                      const PulseSpec& pulse,
                                      Scalar storage_time, Scalar gamma_lo,
                                      Scalar gamma_hi, int scan_points,
                                      Scalar rel_tol);

SweepResult run_fig1(const Config& cfg);
SweepResult run_fig2(const Config& cfg, bool top_panel);
SweepResult run_fig4(const Config& cfg);
SweepResult run_decay(const Config& cfg);
SweepResult run_optimize(const Config& cfg);
SweepResult run_validate(const Config& cfg);
SweepResult run_custom(const Config& cfg);
SweepResult run_experiment(Experiment e, const Config& cfg);

/// Metadata comment, header row, one line per row; numbers with 9
/// significant digits.
void write_csv(std::ostream& out, const SweepResult& r);

std::string format_number(Scalar v);

}  // namespace crib
