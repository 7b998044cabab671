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

#include "lindred/reduction.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "lindred/errors.hpp"

namespace lindred {

namespace {

constexpr double kDropTolerance = 1e-12;

double checked_total(std::span<const double> gammas) {
  if (gammas.empty()) throw InvalidArgument("at least one decay rate required");
  for (std::size_t k = 0; k < gammas.size(); ++k)
    if (!(gammas[k] > 0.0))
      throw InvalidArgument("gamma[" + std::to_string(k) + "] must be > 0");
  return std::accumulate(gammas.begin(), gammas.end(), 0.0);
}

void check_lambda_dim(const ComplexMatrix& m, std::span<const double> gammas,
                      const char* where) {
  if (m.dim() != gammas.size() + 1) {
    std::ostringstream msg;
    msg << where << ": expected dimension " << gammas.size() + 1
        << " for " << gammas.size() << " ground states, got " << m.dim();
    throw DimensionMismatch(msg.str());
  }
}

// (1/Gamma) sum_k Gamma_k Q_k X Q_k^dag
ComplexMatrix weighted_jump_average(const ComplexMatrix& x,
                                    std::span<const double> gammas,
                                    double total) {
  ComplexMatrix out(x.dim());
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    const ComplexMatrix q = lowering_operator(x.dim(), k);
    out.add_scaled(q * x * q.adjoint(), gammas[k] / total);
  }
  return out;
}

void require_ground_supported(const ComplexMatrix& rho_s, const char* where) {
  for (std::size_t i = 0; i < rho_s.dim(); ++i)
    if (std::abs(rho_s(0, i)) > 1e-12 || std::abs(rho_s(i, 0)) > 1e-12)
      throw InvalidArgument(std::string(where) +
                            ": slow state must have zero excited row and column");
}

}  // namespace

ComplexMatrix embed_ground(const ComplexMatrix& ground) {
  ComplexMatrix full(ground.dim() + 1);
  for (std::size_t i = 0; i < ground.dim(); ++i)
    for (std::size_t j = 0; j < ground.dim(); ++j) full(i + 1, j + 1) = ground(i, j);
  return full;
}

ComplexMatrix ground_block(const ComplexMatrix& full) {
  if (full.dim() < 2) throw DimensionMismatch("ground_block: dimension must be >= 2");
  ComplexMatrix g(full.dim() - 1);
  for (std::size_t i = 0; i < g.dim(); ++i)
    for (std::size_t j = 0; j < g.dim(); ++j) g(i, j) = full(i + 1, j + 1);
  return g;
}

SlowFastSplit split_slow_fast(const ComplexMatrix& rho,
                              std::span<const double> gammas) {
  const double total = checked_total(gammas);
  check_lambda_dim(rho, gammas, "split_slow_fast");
  const std::size_t dim = rho.dim();
  const ComplexMatrix p = excited_projector(dim);
  const ComplexMatrix q = ComplexMatrix::identity(dim) - p;

  ComplexMatrix rho_f = p * rho + rho * p - p * rho * p;
  ComplexMatrix rho_s = q * rho * q + weighted_jump_average(rho, gammas, total);
  return {std::move(rho_f), std::move(rho_s)};
}

ComplexMatrix merge(const SlowFastSplit& s, std::span<const double> gammas) {
  const double total = checked_total(gammas);
  check_lambda_dim(s.rho_f, gammas, "merge");
  check_lambda_dim(s.rho_s, gammas, "merge");
  return s.rho_s + s.rho_f - weighted_jump_average(s.rho_f, gammas, total);
}

ComplexMatrix rho_f_first_order(const ComplexMatrix& rho_s,
                                const ComplexMatrix& hamiltonian,
                                double total_gamma) {
  require_same_dim(rho_s, hamiltonian, "rho_f_first_order");
  if (!(total_gamma > 0.0))
    throw InvalidArgument("rho_f_first_order: total_gamma must be > 0");
  require_ground_supported(rho_s, "rho_f_first_order");
  const ComplexMatrix p = excited_projector(rho_s.dim());
  ComplexMatrix out = p * hamiltonian * rho_s - rho_s * hamiltonian * p;
  out *= Complex(0.0, -2.0 / total_gamma);
  return out;
}

KetVector fix_global_phase(const KetVector& v) {
  for (std::size_t i = 0; i < v.dim(); ++i) {
    const double mod = std::abs(v[i]);
    if (mod > kDropTolerance) {
      const Complex phase = std::conj(v[i]) / mod;
      std::vector<Complex> out(v.amplitudes().begin(), v.amplitudes().end());
      for (auto& z : out) z *= phase;
      out[i] = Complex(mod, 0.0);
      return KetVector(std::move(out));
    }
  }
  return v;
}

BrightDarkStates bright_dark_states(std::span<const Complex> rabi) {
  if (rabi.empty()) throw InvalidArgument("bright_dark_states: no ground states");
  const std::size_t n = rabi.size();
  KetVector raw(std::vector<Complex>(rabi.begin(), rabi.end()));
  if (raw.norm() <= kDropTolerance)
    throw InvalidArgument(
        "bright_dark_states: all Rabi amplitudes vanish, bright state undefined");
  KetVector bright = fix_global_phase(raw.normalized());

  std::vector<KetVector> accepted{bright};
  std::vector<KetVector> dark;
  for (std::size_t i = 0; i < n && dark.size() + 1 < n; ++i) {
    KetVector v = KetVector::basis(n, i);
    // Two Gram-Schmidt passes keep the complement orthogonal to ~1e-16.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : accepted) {
        const Complex c = inner(u, v);
        for (std::size_t j = 0; j < n; ++j) v[j] -= c * u[j];
      }
    }
    if (v.norm() <= kDropTolerance) continue;
    KetVector unit = fix_global_phase(v.normalized());
    accepted.push_back(unit);
    dark.push_back(std::move(unit));
  }
  return {std::move(bright), std::move(dark)};
}

ReducedModel reduce_model(const LindbladModel& m) {
  if (m.drive)
    throw InvalidArgument("reduce_model: time-dependent drive is not supported");
  if (!has_lambda_structure(m))
    throw InvalidArgument(
        "reduce_model: jumps do not have the single-excited-state Lambda structure "
        "(Q_k Q_l = 0, Q_k^dag Q_k = |e><e|)");
  if (hermiticity_deviation(m.hamiltonian) > 1e-12)
    throw InvalidArgument("reduce_model: Hamiltonian is not Hermitian");

  const std::size_t dim = m.dim();
  const std::size_t n = dim - 1;
  std::vector<double> gammas;
  for (const auto& j : m.jumps) gammas.push_back(j.rate);
  const double total = checked_total(gammas);

  const ComplexMatrix p = excited_projector(dim);
  const ComplexMatrix q = ComplexMatrix::identity(dim) - p;
  const ComplexMatrix& h = m.hamiltonian;

  ReducedModel rm;
  rm.n_ground = n;
  rm.total_gamma = total;
  rm.hamiltonian_slow = ground_block(q * h * q);

  for (std::size_t k = 0; k < n; ++k) {
    ComplexMatrix qs = ground_block(m.jumps[k].op * h * q);
    qs *= 1.0 / total;
    rm.jumps_slow.push_back({4.0 * gammas[k], std::move(qs)});
  }

  // (1-P) H |e>: the ground-space vector the excited state couples to.
  std::vector<Complex> coupling(n);
  for (std::size_t l = 0; l < n; ++l) coupling[l] = h(l + 1, 0);
  const KetVector v(coupling);
  rm.coupling_power = v.norm() * v.norm();
  if (v.norm() > kDropTolerance) rm.bright_state = fix_global_phase(v.normalized());

  for (std::size_t k = 0; k < n; ++k)
    rm.gamma_slow.push_back(4.0 * gammas[k] * rm.coupling_power / (total * total));

  rm.p_bar = ground_block(q * h * p * h * q);
  rm.p_bar *= 1.0 / (total * total);
  return rm;
}

LindbladModel ReducedModel::as_lindblad() const {
  return LindbladModel{hamiltonian_slow, jumps_slow, jumps_slow, std::nullopt,
                       "slow(N=" + std::to_string(n_ground) + ")"};
}

double ReducedModel::slow_timescale() const noexcept {
  if (coupling_power <= 0.0) return std::numeric_limits<double>::infinity();
  return total_gamma / coupling_power;
}

double slow_output(const ReducedModel& rm, const ComplexMatrix& rho_s) {
  if (rho_s.dim() != rm.n_ground)
    throw DimensionMismatch("slow_output: state dimension does not match reduced model");
  double trace_form = 0.0;
  for (const auto& j : rm.jumps_slow)
    trace_form += j.rate * ((j.op.adjoint() * j.op) * rho_s).trace().real();

  double bright_form = 0.0;
  if (rm.bright_state) {
    const double sum_gamma =
        std::accumulate(rm.gamma_slow.begin(), rm.gamma_slow.end(), 0.0);
    bright_form = sum_gamma * expectation(rho_s, *rm.bright_state).real();
  }
  if (std::abs(trace_form - bright_form) >
      1e-12 * std::max(1.0, std::abs(trace_form))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "slow_output: trace form " << trace_form << " disagrees with bright form "
        << bright_form;
    throw ComputationError(msg.str());
  }
  double y = trace_form;
  if (std::abs(y) <= 1e-12) y = 0.0;
  return y;
}

ComplexMatrix reconstruct_full(const DensityMatrix& rho_s, const LindbladModel& m) {
  if (rho_s.dim() + 1 != m.dim())
    throw DimensionMismatch("reconstruct_full: slow state must be N-dimensional");
  if (!has_lambda_structure(m))
    throw InvalidArgument("reconstruct_full: model is not of Lambda type");
  std::vector<double> gammas;
  for (const auto& j : m.jumps) gammas.push_back(j.rate);
  const double total = checked_total(gammas);
  SlowFastSplit s{ComplexMatrix(m.dim()), embed_ground(rho_s.matrix())};
  s.rho_f = rho_f_first_order(s.rho_s, m.hamiltonian, total);
  return merge(s, gammas);
}

}  // namespace lindred
