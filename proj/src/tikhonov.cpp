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

#include "lindred/tikhonov.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>
#include <sstream>

#include "lindred/errors.hpp"
#include "lindred/loglog_fit.hpp"
#include "lindred/reduction.hpp"
#include "lindred/rk4.hpp"

namespace lindred::tikhonov {

namespace {

constexpr double kSpectralGuard = 1e-12;
constexpr double kRelativeFdStep = 1e-6;

void check_dims(const TikhonovSystem& s, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != s.dim_slow())
    throw DimensionMismatch("slow state has wrong dimension");
}

// Central differences of g with respect to x (wrt_slow) or y.
Matrix fd_jacobian(const VectorField& g, const Vector& x, const Vector& y,
                   bool wrt_slow) {
  const Vector g0 = g(x, y);
  const Eigen::Index cols = wrt_slow ? x.size() : y.size();
  Matrix jac(g0.size(), cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    Vector xp = x, xm = x, yp = y, ym = y;
    const double base = wrt_slow ? x(j) : y(j);
    const double h = kRelativeFdStep * (1.0 + std::abs(base));
    if (wrt_slow) {
      xp(j) += h;
      xm(j) -= h;
    } else {
      yp(j) += h;
      ym(j) -= h;
    }
    jac.col(j) = (g(xp, yp) - g(xm, ym)) / (2.0 * h);
  }
  return jac;
}

}  // namespace

TikhonovSystem::TikhonovSystem(std::size_t dim_slow, Matrix a, VectorField f,
                               VectorField g, double epsilon)
    : dim_slow_(dim_slow),
      a_(std::move(a)),
      f_(std::move(f)),
      g_(std::move(g)),
      epsilon_(epsilon) {
  if (dim_slow == 0) throw InvalidArgument("TikhonovSystem: dim_slow must be >= 1");
  if (a_.rows() == 0 || a_.rows() != a_.cols())
    throw InvalidArgument("TikhonovSystem: A must be square and non-empty");
  if (!(epsilon > 0.0)) throw InvalidArgument("TikhonovSystem: epsilon must be > 0");
  if (!f_ || !g_) throw InvalidArgument("TikhonovSystem: f and g are required");
  Eigen::EigenSolver<Matrix> es(a_, false);
  if (es.info() != Eigen::Success)
    throw ComputationError("TikhonovSystem: eigenvalues of A did not converge");
  const double min_re = es.eigenvalues().real().minCoeff();
  if (min_re <= kSpectralGuard) {
    std::ostringstream msg;
    msg << "TikhonovSystem: A has an eigenvalue with real part " << min_re
        << " (must be > " << kSpectralGuard << ")";
    throw InvalidArgument(msg.str());
  }
  lu_.compute(a_);
}

TikhonovSystem& TikhonovSystem::with_jacobians(JacobianField dg_dx,
                                               JacobianField dg_dy) {
  dg_dx_ = std::move(dg_dx);
  dg_dy_ = std::move(dg_dy);
  return *this;
}

Matrix TikhonovSystem::dg_dx(const Vector& x, const Vector& y) const {
  return dg_dx_ ? (*dg_dx_)(x, y) : fd_jacobian(g_, x, y, true);
}

Matrix TikhonovSystem::dg_dy(const Vector& x, const Vector& y) const {
  return dg_dy_ ? (*dg_dy_)(x, y) : fd_jacobian(g_, x, y, false);
}

std::pair<Vector, Vector> TikhonovSystem::rhs(const Vector& x, const Vector& y) const {
  return {f_(x, y), -(a_ * y) / epsilon_ + g_(x, y)};
}

Vector manifold_first_order(const TikhonovSystem& s, const Vector& x) {
  check_dims(s, x);
  const Vector zero = Vector::Zero(static_cast<Eigen::Index>(s.dim_fast()));
  return s.epsilon() * s.solve_a(s.g(x, zero));
}

Vector manifold_second_order(const TikhonovSystem& s, const Vector& x) {
  check_dims(s, x);
  const double eps = s.epsilon();
  const Vector zero = Vector::Zero(static_cast<Eigen::Index>(s.dim_fast()));
  const Vector a_inv_g = s.solve_a(s.g(x, zero));
  const Vector correction =
      s.dg_dy(x, zero) * a_inv_g - s.solve_a(s.dg_dx(x, zero) * s.f(x, zero));
  return eps * a_inv_g + eps * eps * s.solve_a(correction);
}

Vector manifold(const TikhonovSystem& s, const Vector& x, ExpansionOrder order) {
  return order == ExpansionOrder::first ? manifold_first_order(s, x)
                                        : manifold_second_order(s, x);
}

Vector reduced_vector_field(const TikhonovSystem& s, const Vector& x,
                            ExpansionOrder order) {
  return s.f(x, manifold(s, x, order));
}

OrderFit verify_expansion_order(const SystemFamily& family,
                                std::span<const double> epsilons,
                                const Vector& x0, const Vector& y0,
                                double t_probe, ExpansionOrder order) {
  if (!(t_probe > 0.0)) throw InvalidArgument("verify_expansion_order: t_probe must be > 0");
  OrderFit fit;
  for (const double eps : epsilons) {
    const TikhonovSystem s = family(eps);
    check_dims(s, x0);
    if (static_cast<std::size_t>(y0.size()) != s.dim_fast())
      throw DimensionMismatch("verify_expansion_order: fast state has wrong dimension");
    const Eigen::Index ns = x0.size();
    const Eigen::Index nf = y0.size();

    Vector state(ns + nf);
    state << x0, y0;
    const auto rhs = [&](const Vector& z, double) {
      auto [dx, dy] = s.rhs(z.head(ns), z.tail(nf));
      Vector out(ns + nf);
      out << dx, dy;
      return out;
    };
    const auto steps = static_cast<std::size_t>(std::ceil(t_probe / (eps / 100.0)));
    const double h = t_probe / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i)
      state = rk4_step(state, static_cast<double>(i) * h, h, rhs);

    const Vector x = state.head(ns);
    const double residual = (state.tail(nf) - manifold(s, x, order)).norm();
    if (residual > 0.0 && std::isfinite(residual)) {
      fit.epsilons.push_back(eps);
      fit.residuals.push_back(residual);
    }
  }
  if (fit.epsilons.size() < 3)
    throw ComputationError("verify_expansion_order: fewer than 3 usable grid points");
  const LineFit line = fit_loglog(fit.epsilons, fit.residuals);
  fit.slope = line.slope;
  fit.max_log10_deviation = line.max_log10_deviation;
  return fit;
}

Vector vectorize_hermitian(const ComplexMatrix& m) {
  const std::size_t d = m.dim();
  Vector v(static_cast<Eigen::Index>(d * d));
  Eigen::Index idx = 0;
  for (std::size_t i = 0; i < d; ++i) v(idx++) = m(i, i).real();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      v(idx++) = m(i, j).real();
      v(idx++) = m(i, j).imag();
    }
  return v;
}

ComplexMatrix devectorize_hermitian(const Vector& v, std::size_t dim) {
  if (static_cast<std::size_t>(v.size()) != dim * dim)
    throw DimensionMismatch("devectorize_hermitian: length must be dim^2");
  ComplexMatrix m(dim);
  Eigen::Index idx = 0;
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = v(idx++);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j) {
      const Complex z(v(idx), v(idx + 1));
      idx += 2;
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  return m;
}

namespace {

Vector fast_coords(const ComplexMatrix& rho_f, std::size_t n) {
  Vector y(static_cast<Eigen::Index>(1 + 2 * n));
  y(0) = rho_f(0, 0).real();
  for (std::size_t k = 1; k <= n; ++k) {
    y(static_cast<Eigen::Index>(2 * k - 1)) = rho_f(0, k).real();
    y(static_cast<Eigen::Index>(2 * k)) = rho_f(0, k).imag();
  }
  return y;
}

ComplexMatrix fast_from_coords(const Vector& y, std::size_t n) {
  if (static_cast<std::size_t>(y.size()) != 1 + 2 * n)
    throw DimensionMismatch("fast coordinates have wrong length");
  ComplexMatrix m(n + 1);
  m(0, 0) = y(0);
  for (std::size_t k = 1; k <= n; ++k) {
    const Complex z(y(static_cast<Eigen::Index>(2 * k - 1)),
                    y(static_cast<Eigen::Index>(2 * k)));
    m(0, k) = z;
    m(k, 0) = std::conj(z);
  }
  return m;
}

Vector slow_coords(const ComplexMatrix& rho_s) {
  return vectorize_hermitian(ground_block(rho_s));
}

ComplexMatrix slow_from_coords(const Vector& x, std::size_t n) {
  return embed_ground(devectorize_hermitian(x, n));
}

}  // namespace

Vector LindbladStandardForm::slow_coordinates(const ComplexMatrix& rho_s) const {
  return slow_coords(rho_s);
}

Vector LindbladStandardForm::fast_coordinates(const ComplexMatrix& rho_f) const {
  return fast_coords(rho_f, n_ground);
}

ComplexMatrix LindbladStandardForm::slow_matrix(const Vector& x) const {
  return slow_from_coords(x, n_ground);
}

ComplexMatrix LindbladStandardForm::fast_matrix(const Vector& y) const {
  return fast_from_coords(y, n_ground);
}

LindbladStandardForm lindblad_standard_form(const LindbladModel& m, double epsilon) {
  if (m.drive)
    throw InvalidArgument("lindblad_standard_form: time-dependent drive is not supported");
  if (!has_lambda_structure(m))
    throw InvalidArgument("lindblad_standard_form: model is not of Lambda type");
  if (!(epsilon > 0.0)) throw InvalidArgument("lindblad_standard_form: epsilon must be > 0");

  const std::size_t dim = m.dim();
  const std::size_t n = dim - 1;
  std::vector<double> gammas;
  for (const auto& j : m.jumps) gammas.push_back(j.rate);
  const double total = std::accumulate(gammas.begin(), gammas.end(), 0.0);
  const double total_bar = epsilon * total;

  const ComplexMatrix p = excited_projector(dim);
  const ComplexMatrix q = ComplexMatrix::identity(dim) - p;
  const ComplexMatrix h = m.hamiltonian;

  // A: rho_f -> (Gamma_bar / 2)(rho_f + P rho_f P), assembled column by column.
  const auto nf = static_cast<Eigen::Index>(1 + 2 * n);
  Matrix a(nf, nf);
  for (Eigen::Index c = 0; c < nf; ++c) {
    Vector e = Vector::Zero(nf);
    e(c) = 1.0;
    const ComplexMatrix y = fast_from_coords(e, n);
    ComplexMatrix ay = y + p * y * p;
    ay *= 0.5 * total_bar;
    a.col(c) = fast_coords(ay, n);
  }

  const auto full_state = [n, gammas](const Vector& x, const Vector& y) {
    return merge(SlowFastSplit{fast_from_coords(y, n), slow_from_coords(x, n)}, gammas);
  };

  VectorField f = [=](const Vector& x, const Vector& y) {
    const ComplexMatrix c = commutator(h, full_state(x, y));
    ComplexMatrix out = q * c * q;
    for (std::size_t k = 0; k < n; ++k) {
      const ComplexMatrix qk = lowering_operator(dim, k);
      out.add_scaled(qk * c * qk.adjoint(), gammas[k] / total);
    }
    out *= -kI;
    return slow_coords(out);
  };
  VectorField g = [=](const Vector& x, const Vector& y) {
    const ComplexMatrix c = commutator(h, full_state(x, y));
    ComplexMatrix out = p * c + c * p - p * c * p;
    out *= -kI;
    return fast_coords(out, n);
  };

  return LindbladStandardForm{
      TikhonovSystem(n * n, std::move(a), std::move(f), std::move(g), epsilon), n};
}

}  // namespace lindred::tikhonov
