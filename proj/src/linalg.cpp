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

#include "lindred/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "lindred/errors.hpp"

namespace lindred {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b,
                      const char* where) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << where << ": dimension mismatch (" << a.dim() << " vs " << b.dim()
        << ")";
    throw DimensionMismatch(msg.str());
  }
}

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
  if (dim == 0) throw InvalidArgument("ComplexMatrix: dimension must be >= 1");
}

ComplexMatrix::ComplexMatrix(
    std::initializer_list<std::initializer_list<Complex>> rows)
    : ComplexMatrix(rows.size()) {
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != dim_)
      throw DimensionMismatch("ComplexMatrix: literal is not square");
    std::copy(row.begin(), row.end(), entries_.begin() + r * dim_);
    ++r;
  }
  if (!all_finite())
    throw InvalidArgument("ComplexMatrix: non-finite entry in literal");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      out(j, i) = std::conj((*this)(i, j));
  return out;
}

Complex ComplexMatrix::trace() const noexcept {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

bool ComplexMatrix::all_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator+=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator-=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) noexcept {
  for (auto& z : entries_) z *= scale;
  return *this;
}

ComplexMatrix& ComplexMatrix::add_scaled(const ComplexMatrix& rhs,
                                         Complex scale) {
  require_same_dim(*this, rhs, "add_scaled");
  const double sr = scale.real();
  const double si = scale.imag();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Complex z = rhs.entries_[i];
    entries_[i] += Complex(sr * z.real() - si * z.imag(),
                           sr * z.imag() + si * z.real());
  }
  return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
  lhs += rhs;
  return lhs;
}

ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
  lhs -= rhs;
  return lhs;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_same_dim(lhs, rhs, "operator*");
  const std::size_t n = lhs.dim();
  ComplexMatrix out(n);
  // Expanded complex arithmetic: std::complex operator* carries NaN recovery
  // branches that dominate for these small sizes.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex a = lhs(i, k);
      if (a.real() == 0.0 && a.imag() == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const Complex b = rhs(k, j);
        out(i, j) += Complex(a.real() * b.real() - a.imag() * b.imag(),
                             a.real() * b.imag() + a.imag() * b.real());
      }
    }
  }
  return out;
}

ComplexMatrix operator*(Complex scale, ComplexMatrix m) {
  m *= scale;
  return m;
}

ComplexMatrix operator*(ComplexMatrix m, Complex scale) {
  m *= scale;
  return m;
}

KetVector::KetVector(std::size_t dim) : amplitudes_(dim) {
  if (dim == 0) throw InvalidArgument("KetVector: dimension must be >= 1");
}

KetVector::KetVector(std::vector<Complex> amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty())
    throw InvalidArgument("KetVector: dimension must be >= 1");
  for (const auto& z : amplitudes_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvalidArgument("KetVector: non-finite amplitude");
}

KetVector::KetVector(std::initializer_list<Complex> amplitudes)
    : KetVector(std::vector<Complex>(amplitudes)) {}

KetVector KetVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw InvalidArgument("KetVector::basis: index out of range");
  KetVector v(dim);
  v[index] = 1.0;
  return v;
}

double KetVector::norm() const noexcept {
  double s = 0.0;
  for (const auto& z : amplitudes_) s += std::norm(z);
  return std::sqrt(s);
}

bool KetVector::is_unit(double tol) const noexcept {
  return std::abs(norm() - 1.0) <= tol;
}

KetVector KetVector::normalized() const {
  const double n = norm();
  if (n <= 1e-300) throw InvalidArgument("KetVector: cannot normalize zero vector");
  KetVector out = *this;
  for (auto& z : out.amplitudes_) z /= n;
  return out;
}

Complex inner(const KetVector& a, const KetVector& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("inner: dimension mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

ComplexMatrix outer(const KetVector& a, const KetVector& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("outer: dimension mismatch");
  ComplexMatrix m(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) m(i, j) = a[i] * std::conj(b[j]);
  return m;
}

Complex expectation(const ComplexMatrix& m, const KetVector& a) {
  if (m.dim() != a.dim())
    throw DimensionMismatch("expectation: dimension mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      s += std::conj(a[i]) * m(i, j) * a[j];
  return s;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

ComplexMatrix dissipator(const ComplexMatrix& q, const ComplexMatrix& rho) {
  require_same_dim(q, rho, "dissipator");
  const ComplexMatrix qd = q.adjoint();
  const ComplexMatrix qdq = qd * q;
  ComplexMatrix out = q * rho * qd;
  out *= 2.0;
  out -= qdq * rho;
  out -= rho * qdq;
  return out;
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "frobenius_distance");
  if (hermiticity_deviation(a) > kHermiticityTolerance ||
      hermiticity_deviation(b) > kHermiticityTolerance)
    throw InvalidArgument("frobenius_distance: arguments must be Hermitian");
  // For Hermitian D = A - B, Tr(D^2) = sum |d_ij|^2.
  return frobenius_norm(a - b);
}

double max_abs(const ComplexMatrix& a) noexcept {
  double m = 0.0;
  for (const auto& z : a.entries()) m = std::max(m, std::abs(z));
  return m;
}

double hermiticity_deviation(const ComplexMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j)
      m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
  return m;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  ComplexMatrix out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      out(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.dim());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ComputationError("hermitian_eigenvalues: eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double spectral_norm_hermitian(const ComplexMatrix& a) {
  const auto ev = hermitian_eigenvalues(a);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

DensityReport validate_density(const ComplexMatrix& rho, double tol_trace,
                               double tol_pos, double tol_herm) {
  DensityReport r;
  r.hermiticity_deviation = hermiticity_deviation(rho);
  r.trace_deviation = std::abs(rho.trace() - 1.0);
  if (!rho.all_finite()) {
    r.min_eigenvalue = std::nan("");
    r.accepted = false;
    return r;
  }
  r.min_eigenvalue = hermitian_eigenvalues(rho).front();
  r.accepted = r.hermiticity_deviation <= tol_herm &&
               r.trace_deviation <= tol_trace && r.min_eigenvalue >= -tol_pos;
  return r;
}

namespace {

void require_density(const ComplexMatrix& rho, double tol_trace,
                     double tol_pos) {
  const auto r = validate_density(rho, tol_trace, tol_pos);
  if (!r.accepted) {
    std::ostringstream msg;
    msg << "not a density matrix: hermiticity deviation "
        << r.hermiticity_deviation << ", trace deviation " << r.trace_deviation
        << ", min eigenvalue " << r.min_eigenvalue;
    throw InvalidArgument(msg.str());
  }
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
  require_density(rho_, 1e-9, 1e-9);
}

DensityMatrix DensityMatrix::with_tolerance(ComplexMatrix rho, double tol_trace,
                                            double tol_pos) {
  require_density(rho, tol_trace, tol_pos);
  return DensityMatrix(std::move(rho), Unchecked{});
}

DensityMatrix DensityMatrix::pure(const KetVector& psi) {
  return DensityMatrix(projector(psi.normalized()));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  ComplexMatrix m = ComplexMatrix::identity(dim);
  m *= 1.0 / static_cast<double>(dim);
  return DensityMatrix(std::move(m));
}

}  // namespace lindred
