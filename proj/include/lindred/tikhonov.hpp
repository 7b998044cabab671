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

// Slow-manifold expansions for singularly perturbed systems in standard form
//
//   dx/dt = f(x, y),    dy/dt = -A y / eps + g(x, y),
//
// with every eigenvalue of A in the open right half plane. The attracting
// manifold is y = eps A^{-1} g(x,0) + eps^2 A^{-1} (g_y A^{-1} g - A^{-1} g_x f)
// + O(eps^3), Jacobians taken at (x, 0).

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lindred/linalg.hpp"
#include "lindred/models.hpp"

namespace lindred::tikhonov {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorField = std::function<Vector(const Vector& x, const Vector& y)>;
using JacobianField = std::function<Matrix(const Vector& x, const Vector& y)>;

class TikhonovSystem {
 public:
  /// Throws InvalidArgument if A is not square of size dim_fast, has an
  /// eigenvalue with real part <= 1e-12, or epsilon <= 0.
  TikhonovSystem(std::size_t dim_slow, Matrix a, VectorField f, VectorField g,
                 double epsilon);

  std::size_t dim_slow() const noexcept { return dim_slow_; }
  std::size_t dim_fast() const noexcept { return static_cast<std::size_t>(a_.rows()); }
  double epsilon() const noexcept { return epsilon_; }
  const Matrix& a() const noexcept { return a_; }

  Vector f(const Vector& x, const Vector& y) const { return f_(x, y); }
  Vector g(const Vector& x, const Vector& y) const { return g_(x, y); }

  /// Analytic Jacobians of g; central differences are used when unset.
  TikhonovSystem& with_jacobians(JacobianField dg_dx, JacobianField dg_dy);

  /// dg/dx and dg/dy at (x, y).
  Matrix dg_dx(const Vector& x, const Vector& y) const;
  Matrix dg_dy(const Vector& x, const Vector& y) const;

  /// A^{-1} v by LU solve.
  Vector solve_a(const Vector& v) const { return lu_.solve(v); }

  /// Full right-hand side (dx/dt, dy/dt).
  std::pair<Vector, Vector> rhs(const Vector& x, const Vector& y) const;

 private:
  std::size_t dim_slow_;
  Matrix a_;
  Eigen::PartialPivLU<Matrix> lu_;
  VectorField f_;
  VectorField g_;
  double epsilon_;
  std::optional<JacobianField> dg_dx_;
  std::optional<JacobianField> dg_dy_;
};

enum class ExpansionOrder { first = 1, second = 2 };

/// eps A^{-1} g(x, 0)
Vector manifold_first_order(const TikhonovSystem& s, const Vector& x);

/// eps A^{-1} g(x,0) + eps^2 A^{-1} (g_y A^{-1} g(x,0) - A^{-1} g_x f(x,0))
Vector manifold_second_order(const TikhonovSystem& s, const Vector& x);

Vector manifold(const TikhonovSystem& s, const Vector& x, ExpansionOrder order);

/// f(x, manifold(x)) -- the dynamics restricted to the slow manifold.
Vector reduced_vector_field(const TikhonovSystem& s, const Vector& x,
                            ExpansionOrder order);

struct OrderFit {
  std::vector<double> epsilons;
  std::vector<double> residuals;  // |y(t_probe) - manifold(x(t_probe))|
  double slope = 0.0;
  double max_log10_deviation = 0.0;
};

using SystemFamily = std::function<TikhonovSystem(double epsilon)>;

/// Integrates the full system (RK4, dt = eps / 100) to t_probe for every eps,
/// measures the distance of y from the chosen expansion and fits the
/// log-log slope. Grid points with a zero residual are skipped; fewer than 3
/// usable points is an error.
OrderFit verify_expansion_order(const SystemFamily& family,
                                std::span<const double> epsilons,
                                const Vector& x0, const Vector& y0,
                                double t_probe, ExpansionOrder order);

/// Hermitian d x d <-> real d^2 vector: diagonal first, then Re and Im of the
/// strict upper triangle in row-major order.
Vector vectorize_hermitian(const ComplexMatrix& m);
ComplexMatrix devectorize_hermitian(const Vector& v, std::size_t dim);

/// Standard form of a Lambda-type Lindblad model. Slow coordinates x are the
/// vectorized ground block of rho_s (N^2 reals); fast coordinates y are the
/// excited cross of rho_f: rho_f(0,0), then Re, Im of rho_f(0,k), k = 1..N.
/// The decay rates are written Gamma_k = Gamma_bar_k / eps with the given eps.
struct LindbladStandardForm {
  TikhonovSystem system;
  std::size_t n_ground;

  Vector slow_coordinates(const ComplexMatrix& rho_s) const;
  Vector fast_coordinates(const ComplexMatrix& rho_f) const;
  /// (N+1)-dim matrices with zero excited row/column, resp. zero ground block.
  ComplexMatrix slow_matrix(const Vector& x) const;
  ComplexMatrix fast_matrix(const Vector& y) const;
};

/// Throws InvalidArgument unless the model has Lambda jump structure and no
/// drive.
LindbladStandardForm lindblad_standard_form(const LindbladModel& m, double epsilon);

}  // namespace lindred::tikhonov
