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

// Dense complex matrices and the operator primitives of Lindblad dynamics.
//
// Basis convention shared by every module: index 0 is the excited state |e>,
// indices 1..N are the ground states |g_1>..|g_N>.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lindred {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Square complex matrix, row-major.
class ComplexMatrix {
 public:
  /// Zero matrix of the given dimension (dim >= 1).
  explicit ComplexMatrix(std::size_t dim);

  /// Row-by-row literal; rows must all have length equal to the row count.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix zeros(std::size_t dim) { return ComplexMatrix(dim); }
  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const Complex> diag);
  static ComplexMatrix diagonal(std::span<const double> diag);

  std::size_t dim() const noexcept { return dim_; }

  Complex& operator()(std::size_t row, std::size_t col) noexcept {
    return entries_[row * dim_ + col];
  }
  const Complex& operator()(std::size_t row, std::size_t col) const noexcept {
    return entries_[row * dim_ + col];
  }

  std::span<Complex> entries() noexcept { return entries_; }
  std::span<const Complex> entries() const noexcept { return entries_; }

  ComplexMatrix adjoint() const;
  Complex trace() const noexcept;
  bool all_finite() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex scale) noexcept;

  /// this += scale * rhs
  ComplexMatrix& add_scaled(const ComplexMatrix& rhs, Complex scale);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);
ComplexMatrix operator*(ComplexMatrix m, Complex scale);

/// Column state vector.
class KetVector {
 public:
  explicit KetVector(std::size_t dim);
  explicit KetVector(std::vector<Complex> amplitudes);
  KetVector(std::initializer_list<Complex> amplitudes);

  /// Standard basis vector |index>.
  static KetVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return amplitudes_.size(); }
  Complex& operator[](std::size_t i) noexcept { return amplitudes_[i]; }
  const Complex& operator[](std::size_t i) const noexcept { return amplitudes_[i]; }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }

  double norm() const noexcept;
  bool is_unit(double tol = 1e-12) const noexcept;
  /// Throws InvalidArgument for a (numerically) zero vector.
  KetVector normalized() const;

  friend bool operator==(const KetVector&, const KetVector&) = default;

 private:
  std::vector<Complex> amplitudes_;
};

/// <a|b>
Complex inner(const KetVector& a, const KetVector& b);
/// |a><b|
ComplexMatrix outer(const KetVector& a, const KetVector& b);
/// |a><a|
inline ComplexMatrix projector(const KetVector& a) { return outer(a, a); }
/// <a|M|a>
Complex expectation(const ComplexMatrix& m, const KetVector& a);

/// AB - BA
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// 2 Q rho Q^dag - Q^dag Q rho - rho Q^dag Q, without the rate prefactor.
ComplexMatrix dissipator(const ComplexMatrix& q, const ComplexMatrix& rho);

/// sqrt(sum |a_ij|^2)
double frobenius_norm(const ComplexMatrix& a);

/// sqrt(Tr[(A-B)^2]) for Hermitian A, B (rejects non-Hermitian input beyond
/// 1e-10).
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs(const ComplexMatrix& a) noexcept;

/// max |A - A^dag|
double hermiticity_deviation(const ComplexMatrix& a);

/// (A + A^dag) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& a);

/// Ascending eigenvalues of the Hermitian part of `a`.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

/// Largest |eigenvalue| of a Hermitian matrix.
double spectral_norm_hermitian(const ComplexMatrix& a);

struct DensityReport {
  double hermiticity_deviation = 0.0;
  double trace_deviation = 0.0;  // |Tr(rho) - 1|, including any imaginary part
  double min_eigenvalue = 0.0;
  bool accepted = false;
};

inline constexpr double kHermiticityTolerance = 1e-10;

DensityReport validate_density(const ComplexMatrix& rho, double tol_trace,
                               double tol_pos,
                               double tol_herm = kHermiticityTolerance);

/// Hermitian, unit-trace, positive semidefinite matrix. Construction validates
/// with tolerances (1e-9 trace, 1e-9 positivity, 1e-10 Hermiticity).
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix rho);

  /// Validate against caller-supplied tolerances instead of the defaults.
  static DensityMatrix with_tolerance(ComplexMatrix rho, double tol_trace,
                                      double tol_pos);

  static DensityMatrix pure(const KetVector& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);

  const ComplexMatrix& matrix() const noexcept { return rho_; }
  std::size_t dim() const noexcept { return rho_.dim(); }

 private:
  struct Unchecked {};
  DensityMatrix(ComplexMatrix rho, Unchecked) : rho_(std::move(rho)) {}

  ComplexMatrix rho_;
};

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b,
                      const char* where);

}  // namespace lindred
