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

// Brute-force time-domain integration of the field / coherence equations in
// the instantaneous-propagation regime (transit = 0):
//
//   d_z E = i nu sum_k w_k sigma_k,      d_t sigma_k = -i D_k sigma_k + i E.
//
// The atoms are a discrete set of detunings D_k = d0 + d' with quadrature
// weights w_k that include both densities. Coherences are advanced with an
// exponential integrator that is exact for field samples varying linearly
// over a step, and the field is marched in z with the trapezoidal rule,
// implicit in the local coherence.

#pragma once

#include <Eigen/Core>

#include "crib/analytic.hpp"
#include "crib/kernels.hpp"
#include "crib/spectral.hpp"

namespace crib {

struct OracleConfig {
  int n_z = 64;         // spatial cells
  int n_delta0 = 1;     // initial-line nodes (ignored for a delta line)
  int n_deltap = 512;   // broadening nodes, multiple of 8
  Scalar dt = 1e-3;
  Scalar t_start = -30;
  Scalar t_end = 30;
  Scalar support_widths = 8;

  /// Throws ConfigError on resolution below the contract for this medium:
  /// n_z >= 64 and dt <= 0.02 / max(1, gamma, gamma0).
  void validate(const MediumSpec& m) const;
};

/// Coherence samples sigma(z_i, atom_k), one column per z node.
struct CoherenceField {
  Eigen::MatrixXcd sigma;  // (n_atoms, n_z + 1)
  RealVector delta0;       // per atom
  RealVector deltap;       // per atom
  RealVector weight;       // per atom, includes both densities
  int n_deltap = 0;        // atoms are stored d0-major: k * n_deltap + j
  Direction direction = Direction::forward;
  bool rephased = false;

  Index atoms() const { return sigma.rows(); }
  Scalar norm() const { return sigma.norm(); }
};

struct AbsorptionResult {
  TimeSignal transmitted;
  CoherenceField state;
  // Field energy still inside the medium at t = 0, relative to the input.
  Scalar residual_field = 0;
};

/// Atom layout for a medium: tensor product of the initial-line and
/// broadening rules, sigma = 0.
CoherenceField make_coherence_field(const MediumSpec& m,
                                    const OracleConfig& cfg);

/// Integrates from cfg.t_start to t = 0 with the input entering at z = 0.
AbsorptionResult absorb(const MediumSpec& m, const TimeSignal& in,
                        const OracleConfig& cfg);

/// Reverses every broadening detuning; the backward protocol also relabels
/// the coherence as backward-propagating. Throws StateError if applied twice.
CoherenceField rephase(const CoherenceField& state, const ProtocolConfig& p);

/// Integrates from t = 0 to cfg.t_end and records the retrieved field at
/// z = 0 (backward) or z = L (forward). The coherence left in the medium at
/// t_end is written to `final_state` when given.
TimeSignal retrieve(const CoherenceField& state, const MediumSpec& m,
                    const ProtocolConfig& p, const OracleConfig& cfg,
                    CoherenceField* final_state = nullptr);

/// nu int dz sum_k w_k |sigma_k|^2, the excitation energy in field units.
Scalar stored_energy(const CoherenceField& state, const MediumSpec& m);

/// Input pulse sampled on the oracle's absorption window.
TimeSignal oracle_input(const PulseSpec& pulse, const OracleConfig& cfg);

struct OracleRun {
  TimeSignal input;
  TimeSignal transmitted;
  TimeSignal output;
  Scalar stored_energy = 0;     // at t = 0
  Scalar remaining_energy = 0;  // at t_end
  Scalar residual_field = 0;
};

/// absorb -> rephase -> retrieve for one protocol. The pulse is recentred
/// at -storage_time / 2; throws ConfigError if more than 1e-6 of its energy
/// would arrive after t = 0.
OracleRun run_oracle(const MediumSpec& m, const ProtocolConfig& p,
                     const PulseSpec& pulse, const OracleConfig& cfg);

}  // namespace crib
