// Copyright 2026 The lindred Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Adiabatic elimination of a fast-decaying excited state.
//
// With P = |e><e| and Gamma = sum_k Gamma_k the state splits into
//   rho_f = P rho + rho P - P rho P
//   rho_s = (1-P) rho (1-P) + (1/Gamma) sum_k Gamma_k Q_k rho Q_k^dag
// and, to first order in the decay time, the slow part obeys a Lindblad
// equation on the ground space with
//   H_s     = (1-P) H (1-P)
//   Q_{s,k} = Q_k H (1-P) / Gamma,  at rate 4 Gamma_k
//   y_s     = sum_k 4 Gamma_k Tr(Q_{s,k}^dag Q_{s,k} rho_s).
// All quantities are in physical units (no explicit small parameter).

#include <optional>
#include <span>
#include <vector>

#include "lindred/linalg.hpp"
#include "lindred/models.hpp"

namespace lindred {

/// Both parts live in the full (N+1)-dimensional space; rho_s has a zero
/// excited row and column.
struct SlowFastSplit {
  ComplexMatrix rho_f;
  ComplexMatrix rho_s;
};

SlowFastSplit split_slow_fast(const ComplexMatrix& rho,
                              std::span<const double> gammas);
inline SlowFastSplit split_slow_fast(const DensityMatrix& rho,
                                     std::span<const double> gammas) {
  return split_slow_fast(rho.matrix(), gammas);
}

/// Inverse of split_slow_fast:
/// rho = rho_s + rho_f - (1/Gamma) sum_k Gamma_k Q_k rho_f Q_k^dag.
ComplexMatrix merge(const SlowFastSplit& s, std::span<const double> gammas);

/// First-order fast part slaved to a ground-supported rho_s:
/// rho_f = (-2i/Gamma) (P H rho_s - rho_s H P).
ComplexMatrix rho_f_first_order(const ComplexMatrix& rho_s,
                                const ComplexMatrix& hamiltonian,
                                double total_gamma);

struct ReducedModel {
  std::size_t n_ground = 0;
  ComplexMatrix hamiltonian_slow{1};
  std::vector<Jump> jumps_slow;  // (4 Gamma_k, Q_{s,k}), N x N
  std::optional<KetVector> bright_state;  // absent when H has no e-g coupling
  std::vector<double> gamma_slow;  // gamma_k = 4 Gamma_k |v|^2 / Gamma^2
  ComplexMatrix p_bar{1};  // Q_{s,k}^dag Q_{s,k}, identical for every k
  double total_gamma = 0.0;
  double coupling_power = 0.0;  // |(1-P) H |e>|^2, i.e. sum |Omega_l|^2

  /// Slow master equation as an N-dimensional LindbladModel whose output is
  /// sum_k 4 Gamma_k Tr(Q_{s,k}^dag Q_{s,k} rho_s).
  LindbladModel as_lindblad() const;

  /// T_s = Gamma / sum |Omega|^2 (infinite when the coupling vanishes).
  double slow_timescale() const noexcept;
};

/// Requires the Lambda jump structure (Q_k = |g_k><e|) and a time-independent
/// Hermitian H; any such H is accepted.
ReducedModel reduce_model(const LindbladModel& m);

/// y_s by both the trace form and (sum gamma_k) <b|rho_s|b>; throws
/// ComputationError if they disagree beyond 1e-12 (relative to max(1, y_s)).
/// Values with |y_s| <= 1e-12 are returned as exactly 0.
double slow_output(const ReducedModel& rm, const ComplexMatrix& rho_s);
inline double slow_output(const ReducedModel& rm, const DensityMatrix& rho_s) {
  return slow_output(rm, rho_s.matrix());
}

struct BrightDarkStates {
  KetVector bright;
  std::vector<KetVector> dark_basis;
};

/// Bright state sum_l Omega_l |g_l> / norm and an orthonormal basis of its
/// complement in the ground space (Gram-Schmidt over the standard basis).
/// Each returned vector has its first nonzero component real and positive.
BrightDarkStates bright_dark_states(std::span<const Complex> rabi);

/// Embed rho_s, attach the first-order rho_f and merge. The result is
/// Hermitian with unit trace; it is not positive in general (the attached
/// coherences are first order while the excited population is zero).
ComplexMatrix reconstruct_full(const DensityMatrix& rho_s, const LindbladModel& m);

/// N x N -> (N+1) x (N+1) with zero excited row and column.
ComplexMatrix embed_ground(const ComplexMatrix& ground);
/// (N+1) x (N+1) -> N x N ground block.
ComplexMatrix ground_block(const ComplexMatrix& full);

/// Multiply by the unit phase that makes the first component with modulus
/// above 1e-12 real and positive.
KetVector fix_global_phase(const KetVector& v);

}  // namespace lindred
