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

// Lindblad models of an (N+1)-level system with one decaying excited state.
// Units: hbar = 1, every Hamiltonian is stored as H/hbar (angular frequency).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lindred/linalg.hpp"

namespace lindred {

/// Rotating-frame Lambda-system parameters: detunings delta_k, complex Rabi
/// amplitudes Omega_k and decay rates Gamma_k of |e> -> |g_k>.
struct LambdaParams {
  std::vector<double> detuning;
  std::vector<Complex> rabi;
  std::vector<double> gamma;

  std::size_t n_ground() const noexcept { return gamma.size(); }
  double total_gamma() const noexcept;
  /// sum_k |Omega_k|^2
  double rabi_power() const noexcept;

  /// Throws InvalidArgument naming the offending field (e.g. "gamma[2]").
  void validate() const;
};

/// Laboratory-frame parameters: H0 = lambda_e |e><e| + sum lambda_g[k]
/// |g_k><g_k|, H1 = sum mu_k (|g_k><e| + |e><g_k|), laser amplitudes u_k.
struct ThreeScaleParams {
  double lambda_e = 0.0;
  std::vector<double> lambda_g;
  std::vector<double> mu;
  std::vector<Complex> u_amp;
  std::vector<double> detuning;
  std::vector<double> gamma;

  std::size_t n_ground() const noexcept { return gamma.size(); }
  /// omega_k = lambda_e - lambda_g[k]
  double omega(std::size_t k) const { return lambda_e - lambda_g.at(k); }
  /// omega_kl = omega_k - omega_l
  double omega_diff(std::size_t k, std::size_t l) const {
    return omega(k) - omega(l);
  }
  double max_omega() const;

  void validate() const;
  /// Human-readable notes for each violated regime inequality
  /// |omega_kl|, |mu_k u_k| << Gamma << omega. Never thrown.
  std::vector<std::string> regime_warnings() const;
};

struct Jump {
  double rate;
  ComplexMatrix op;
};

/// Time-dependent Hamiltonian term amplitude(t) * coupling.
struct Drive {
  std::function<double(double)> amplitude;
  ComplexMatrix coupling;
};

/// d/dt rho = -i[H(t), rho] + sum_k (rate_k / 2) D[Q_k](rho),
/// y = sum_k w_k Tr(Q_k^dag Q_k rho) over output_weights.
struct LindbladModel {
  ComplexMatrix hamiltonian;
  std::vector<Jump> jumps;
  std::vector<Jump> output_weights;
  std::optional<Drive> drive;
  std::string name;

  std::size_t dim() const noexcept { return hamiltonian.dim(); }
  ComplexMatrix hamiltonian_at(double t) const;
  double total_rate() const noexcept;
};

LindbladModel build_two_scale(const LambdaParams& p);
LindbladModel build_three_scale(const ThreeScaleParams& p);

/// u(t) = sum_k u_k e^{i(omega_k - delta_k)t} + c.c.
double laser_field(const ThreeScaleParams& p, double t);

/// Rotating-wave effective parameters, Omega_k = mu_k u_k.
LambdaParams rwa_effective(const ThreeScaleParams& p);

/// Warnings when |Omega_k| or |delta_k| is not small against min Gamma.
std::vector<std::string> separation_warnings(const LambdaParams& p);

/// Sum_k w_k Tr(Q_k^dag Q_k rho); values in [-1e-12, 0) are clipped to 0.
double output_full(const LindbladModel& m, const ComplexMatrix& rho);
inline double output_full(const LindbladModel& m, const DensityMatrix& rho) {
  return output_full(m, rho.matrix());
}

/// Right-hand side of the master equation at time t.
ComplexMatrix generator_apply(const LindbladModel& m, const ComplexMatrix& rho,
                              double t);

/// Precompiled generator for repeated evaluation inside integrators:
/// -i(H_eff rho - rho H_eff^dag) + sum_k rate_k Q_k rho Q_k^dag with
/// H_eff = H - (i/2) sum_k rate_k Q_k^dag Q_k and sparse jump sandwiches.
/// The effective-Hamiltonian form uses rho = rho^dag: only valid for
/// Hermitian input (use generator_apply otherwise).
class Generator {
 public:
  explicit Generator(const LindbladModel& m);

  std::size_t dim() const noexcept { return dim_; }
  ComplexMatrix operator()(const ComplexMatrix& rho, double t) const;

 private:
  struct Entry {
    std::size_t row;
    std::size_t col;
    Complex value;
  };
  struct SparseJump {
    double rate;
    std::vector<Entry> entries;
  };

  std::size_t dim_;
  ComplexMatrix h_eff_;
  std::vector<SparseJump> jumps_;
  std::optional<Drive> drive_;
};

/// Lambda structure Q_k Q_l = 0 (k != l), Q_k^dag Q_k = P = |e><e|, checked
/// entrywise to `tol`.
bool has_lambda_structure(const LindbladModel& m, double tol = 1e-14);

/// P = |e><e| in dimension `dim`.
ComplexMatrix excited_projector(std::size_t dim);

/// |g_k><e| (k is 0-based over the ground states).
ComplexMatrix lowering_operator(std::size_t dim, std::size_t k);

}  // namespace lindred
