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

#include "lindred/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lindred/errors.hpp"

namespace lindred {

namespace {

std::string indexed(const char* field, std::size_t k) {
  return std::string(field) + "[" + std::to_string(k) + "]";
}

void check_length(const char* field, std::size_t got, std::size_t want) {
  if (got != want) {
    std::ostringstream msg;
    msg << field << ": expected " << want << " entries, got " << got;
    throw InvalidArgument(msg.str());
  }
}

void check_finite(const char* field, std::size_t k, double v) {
  if (!std::isfinite(v)) throw InvalidArgument(indexed(field, k) + " is not finite");
}

void check_gammas(const std::vector<double>& gamma) {
  if (gamma.empty()) throw InvalidArgument("gamma: at least one ground state required");
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    check_finite("gamma", k, gamma[k]);
    if (!(gamma[k] > 0.0))
      throw InvalidArgument(indexed("gamma", k) + " must be > 0");
  }
}

// Output weights of a Lambda system: y = sum_k Gamma_k Tr(Q_k^dag Q_k rho).
std::vector<Jump> lambda_jumps(std::size_t dim, const std::vector<double>& gamma) {
  std::vector<Jump> jumps;
  jumps.reserve(gamma.size());
  for (std::size_t k = 0; k < gamma.size(); ++k)
    jumps.push_back({gamma[k], lowering_operator(dim, k)});
  return jumps;
}

}  // namespace

double LambdaParams::total_gamma() const noexcept {
  return std::accumulate(gamma.begin(), gamma.end(), 0.0);
}

double LambdaParams::rabi_power() const noexcept {
  double s = 0.0;
  for (const auto& w : rabi) s += std::norm(w);
  return s;
}

void LambdaParams::validate() const {
  check_gammas(gamma);
  check_length("detuning", detuning.size(), gamma.size());
  check_length("rabi", rabi.size(), gamma.size());
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    check_finite("detuning", k, detuning[k]);
    check_finite("rabi", k, rabi[k].real());
    check_finite("rabi", k, rabi[k].imag());
  }
}

double ThreeScaleParams::max_omega() const {
  double w = 0.0;
  for (std::size_t k = 0; k < n_ground(); ++k) w = std::max(w, std::abs(omega(k)));
  return w;
}

void ThreeScaleParams::validate() const {
  check_gammas(gamma);
  const std::size_t n = gamma.size();
  check_length("lambda_g", lambda_g.size(), n);
  check_length("mu", mu.size(), n);
  check_length("u", u_amp.size(), n);
  check_length("detuning", detuning.size(), n);
  if (!std::isfinite(lambda_e)) throw InvalidArgument("lambda_e is not finite");
  for (std::size_t k = 0; k < n; ++k) {
    check_finite("lambda_g", k, lambda_g[k]);
    check_finite("mu", k, mu[k]);
    check_finite("u", k, u_amp[k].real());
    check_finite("u", k, u_amp[k].imag());
    check_finite("detuning", k, detuning[k]);
    if (!(lambda_e > lambda_g[k]))
      throw InvalidArgument(indexed("lambda_g", k) +
                            " must lie below lambda_e (upward optical transition)");
  }
}

std::vector<std::string> ThreeScaleParams::regime_warnings() const {
  std::vector<std::string> out;
  const double g_min = *std::min_element(gamma.begin(), gamma.end());
  const double g_max = *std::max_element(gamma.begin(), gamma.end());
  double w_min = omega(0);
  for (std::size_t k = 0; k < n_ground(); ++k) w_min = std::min(w_min, omega(k));
  double slow = 0.0;
  for (std::size_t k = 0; k < n_ground(); ++k) {
    slow = std::max(slow, std::abs(mu[k] * u_amp[k]));
    for (std::size_t l = 0; l < n_ground(); ++l)
      slow = std::max(slow, std::abs(omega_diff(k, l)));
  }
  if (slow >= g_min) {
    std::ostringstream msg;
    msg << "time-scale separation weak: slow frequency " << slow
        << " is not small against min Gamma " << g_min;
    out.push_back(msg.str());
  }
  if (g_max >= w_min) {
    std::ostringstream msg;
    msg << "time-scale separation weak: max Gamma " << g_max
        << " is not small against min optical frequency " << w_min;
    out.push_back(msg.str());
  }
  return out;
}

ComplexMatrix LindbladModel::hamiltonian_at(double t) const {
  if (!drive) return hamiltonian;
  ComplexMatrix h = hamiltonian;
  h.add_scaled(drive->coupling, drive->amplitude(t));
  return h;
}

double LindbladModel::total_rate() const noexcept {
  double s = 0.0;
  for (const auto& j : jumps) s += j.rate;
  return s;
}

ComplexMatrix excited_projector(std::size_t dim) {
  ComplexMatrix p(dim);
  p(0, 0) = 1.0;
  return p;
}

ComplexMatrix lowering_operator(std::size_t dim, std::size_t k) {
  if (k + 1 >= dim) throw InvalidArgument("lowering_operator: ground index out of range");
  ComplexMatrix q(dim);
  q(k + 1, 0) = 1.0;
  return q;
}

LindbladModel build_two_scale(const LambdaParams& p) {
  p.validate();
  const std::size_t n = p.n_ground();
  const std::size_t dim = n + 1;
  ComplexMatrix h(dim);
  for (std::size_t k = 0; k < n; ++k) {
    h(k + 1, k + 1) = p.detuning[k];
    h(k + 1, 0) = p.rabi[k];
    h(0, k + 1) = std::conj(p.rabi[k]);
  }
  LindbladModel m{std::move(h), lambda_jumps(dim, p.gamma),
                  lambda_jumps(dim, p.gamma), std::nullopt,
                  "two-scale(N=" + std::to_string(n) + ")"};
  return m;
}

double laser_field(const ThreeScaleParams& p, double t) {
  double u = 0.0;
  for (std::size_t k = 0; k < p.n_ground(); ++k) {
    const double phase = (p.omega(k) - p.detuning[k]) * t;
    // u_k e^{i phase} + conj(u_k) e^{-i phase} = 2 Re(u_k e^{i phase})
    u += 2.0 * (p.u_amp[k].real() * std::cos(phase) -
                p.u_amp[k].imag() * std::sin(phase));
  }
  return u;
}

LindbladModel build_three_scale(const ThreeScaleParams& p) {
  p.validate();
  const std::size_t n = p.n_ground();
  const std::size_t dim = n + 1;
  ComplexMatrix h0(dim);
  ComplexMatrix h1(dim);
  h0(0, 0) = p.lambda_e;
  for (std::size_t k = 0; k < n; ++k) {
    h0(k + 1, k + 1) = p.lambda_g[k];
    h1(k + 1, 0) = p.mu[k];
    h1(0, k + 1) = p.mu[k];
  }
  std::optional<Drive> drive;
  const bool driven = std::any_of(p.u_amp.begin(), p.u_amp.end(),
                                  [](const Complex& u) { return u != 0.0; });
  if (driven) drive = Drive{[p](double t) { return laser_field(p, t); }, h1};
  return LindbladModel{std::move(h0), lambda_jumps(dim, p.gamma),
                       lambda_jumps(dim, p.gamma), std::move(drive),
                       "three-scale(N=" + std::to_string(n) + ")"};
}

LambdaParams rwa_effective(const ThreeScaleParams& p) {
  p.validate();
  LambdaParams out;
  out.detuning = p.detuning;
  out.gamma = p.gamma;
  out.rabi.reserve(p.n_ground());
  for (std::size_t k = 0; k < p.n_ground(); ++k)
    out.rabi.push_back(p.mu[k] * p.u_amp[k]);
  return out;
}

std::vector<std::string> separation_warnings(const LambdaParams& p) {
  std::vector<std::string> out;
  const double g_min = *std::min_element(p.gamma.begin(), p.gamma.end());
  for (std::size_t k = 0; k < p.n_ground(); ++k) {
    if (std::abs(p.rabi[k]) >= g_min) {
      std::ostringstream msg;
      msg << "time-scale separation weak: |rabi[" << k
          << "]| = " << std::abs(p.rabi[k]) << " >= min Gamma " << g_min;
      out.push_back(msg.str());
    }
    if (std::abs(p.detuning[k]) >= g_min) {
      std::ostringstream msg;
      msg << "time-scale separation weak: |detuning[" << k
          << "]| = " << std::abs(p.detuning[k]) << " >= min Gamma " << g_min;
      out.push_back(msg.str());
    }
  }
  return out;
}

double output_full(const LindbladModel& m, const ComplexMatrix& rho) {
  if (rho.dim() != m.dim())
    throw DimensionMismatch("output_full: state dimension does not match model");
  double y = 0.0;
  for (const auto& w : m.output_weights) {
    const ComplexMatrix qdq = w.op.adjoint() * w.op;
    y += w.rate * (qdq * rho).trace().real();
  }
  if (y < 0.0 && y >= -1e-12) y = 0.0;
  return y;
}

ComplexMatrix generator_apply(const LindbladModel& m, const ComplexMatrix& rho,
                              double t) {
  if (rho.dim() != m.dim())
    throw DimensionMismatch("generator_apply: state dimension does not match model");
  ComplexMatrix out = commutator(m.hamiltonian_at(t), rho);
  out *= -kI;
  for (const auto& j : m.jumps) out.add_scaled(dissipator(j.op, rho), 0.5 * j.rate);
  return out;
}

Generator::Generator(const LindbladModel& m)
    : dim_(m.dim()), h_eff_(m.hamiltonian), drive_(m.drive) {
  for (const auto& j : m.jumps) {
    require_same_dim(j.op, m.hamiltonian, "Generator");
    h_eff_.add_scaled(j.op.adjoint() * j.op, Complex(0.0, -0.5 * j.rate));
    SparseJump sj{j.rate, {}};
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c)
        if (j.op(r, c) != 0.0) sj.entries.push_back({r, c, j.op(r, c)});
    jumps_.push_back(std::move(sj));
  }
}

ComplexMatrix Generator::operator()(const ComplexMatrix& rho, double t) const {
  if (rho.dim() != dim_)
    throw DimensionMismatch("Generator: state dimension does not match model");
  // -i(H_eff rho - rho H_eff^dag)
  ComplexMatrix a = h_eff_ * rho;
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) {
      const Complex v = a(i, j) - std::conj(a(j, i));
      out(i, j) = Complex(v.imag(), -v.real());
    }
  if (drive_) {
    const double u = drive_->amplitude(t);
    if (u != 0.0) out.add_scaled(commutator(drive_->coupling, rho), Complex(0.0, -u));
  }
  for (const auto& j : jumps_) {
    for (const auto& e1 : j.entries)
      for (const auto& e2 : j.entries)
        out(e1.row, e2.row) += j.rate * e1.value * rho(e1.col, e2.col) * std::conj(e2.value);
  }
  return out;
}

bool has_lambda_structure(const LindbladModel& m, double tol) {
  const std::size_t dim = m.dim();
  if (m.jumps.empty() || m.jumps.size() + 1 != dim) return false;
  const ComplexMatrix p = excited_projector(dim);
  for (std::size_t k = 0; k < m.jumps.size(); ++k) {
    const auto& qk = m.jumps[k].op;
    if (qk.dim() != dim) return false;
    if (max_abs(qk.adjoint() * qk - p) > tol) return false;
    // Distinct ground targets: Q_l^dag Q_k = 0 for l != k.
    for (std::size_t l = 0; l < m.jumps.size(); ++l)
      if (l != k && max_abs(m.jumps[l].op.adjoint() * qk) > tol) return false;
  }
  return true;
}

}  // namespace lindred
