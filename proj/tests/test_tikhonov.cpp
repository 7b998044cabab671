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

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lindred/errors.hpp"
#include "lindred/loglog_fit.hpp"
#include "lindred/models.hpp"
#include "lindred/reduction.hpp"
#include "lindred/tikhonov.hpp"
#include "support.hpp"

using namespace lindred;
using namespace lindred::tikhonov;
using lindred::testing::Rng;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) out(i++) = d;
  return out;
}

Matrix scalar(double a) {
  Matrix m(1, 1);
  m(0, 0) = a;
  return m;
}

// dx/dt = y, dy/dt = -y/eps + x (+ y if with_y)
TikhonovSystem scalar_family(double eps, bool with_y) {
  return TikhonovSystem(
      1, scalar(1.0), [](const Vector&, const Vector& y) { return Vector(y); },
      [with_y](const Vector& x, const Vector& y) { return Vector(with_y ? Vector(x + y) : x); },
      eps);
}

// Linear system dx/dt = F x + G y, dy/dt = -A y / eps + K x + L y.
struct Linear {
  Matrix F, G, A, K, L;

  TikhonovSystem system(double eps) const {
    const Matrix f_ = F, g_ = G, k_ = K, l_ = L;
    return TikhonovSystem(
        static_cast<std::size_t>(F.rows()), A,
        [f_, g_](const Vector& x, const Vector& y) { return Vector(f_ * x + g_ * y); },
        [k_, l_](const Vector& x, const Vector& y) { return Vector(k_ * x + l_ * y); }, eps);
  }

  // Invariant slow subspace y = M x from the eigenvectors of the full matrix.
  Matrix exact_slope(double eps) const {
    const Eigen::Index ns = F.rows(), nf = A.rows();
    Matrix full(ns + nf, ns + nf);
    full << F, G, K, L - A / eps;
    Eigen::EigenSolver<Matrix> es(full);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(ns + nf));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return std::abs(es.eigenvalues()(a)) < std::abs(es.eigenvalues()(b));
    });
    Eigen::MatrixXcd v(ns + nf, ns);
    for (Eigen::Index c = 0; c < ns; ++c) v.col(c) = es.eigenvectors().col(order[static_cast<std::size_t>(c)]);
    const Eigen::MatrixXcd m = v.bottomRows(nf) * v.topRows(ns).inverse();
    return m.real();
  }
};

Linear sample_linear() {
  Linear s;
  s.F.resize(2, 2);
  s.F << -0.3, 0.8, -0.5, 0.1;
  s.G.resize(2, 3);
  s.G << 0.4, -0.2, 0.7, 0.3, 0.5, -0.6;
  s.A.resize(3, 3);
  s.A << 2.0, 0.3, 0.0, -0.4, 1.5, 0.2, 0.1, 0.0, 1.0;
  s.K.resize(3, 2);
  s.K << 1.0, -0.5, 0.2, 0.9, -0.7, 0.4;
  s.L.resize(3, 3);
  s.L << 0.2, -0.1, 0.3, 0.0, 0.4, 0.1, -0.2, 0.3, -0.1;
  return s;
}

}  // namespace

TEST_CASE("construction guards") {
  const auto f = [](const Vector&, const Vector& y) { return Vector(y); };
  const auto g = [](const Vector& x, const Vector&) { return Vector(x); };
  CHECK_THROWS_AS(TikhonovSystem(1, scalar(0.0), f, g, 0.1), InvalidArgument);
  CHECK_THROWS_AS(TikhonovSystem(1, scalar(-1.0), f, g, 0.1), InvalidArgument);
  CHECK_THROWS_AS(TikhonovSystem(1, scalar(1e-13), f, g, 0.1), InvalidArgument);
  CHECK_THROWS_AS(TikhonovSystem(1, scalar(1.0), f, g, 0.0), InvalidArgument);
  Matrix rect(1, 2);
  rect << 1.0, 1.0;
  CHECK_THROWS_AS(TikhonovSystem(1, rect, f, g, 0.1), InvalidArgument);
  // Rotation-like A with positive real parts is accepted.
  Matrix rot(2, 2);
  rot << 1.0, -5.0, 5.0, 1.0;
  CHECK_NOTHROW(TikhonovSystem(2, rot, [](const Vector& x, const Vector&) { return Vector(x); },
                               [](const Vector& x, const Vector&) { return Vector(x); }, 0.1));
  const auto s = scalar_family(0.1, false);
  CHECK_THROWS_AS(manifold_first_order(s, vec({1.0, 2.0})), DimensionMismatch);
}

TEST_CASE("first-order manifold examples") {
  const auto zero = TikhonovSystem(
      1, scalar(1.0), [](const Vector& x, const Vector&) { return Vector(x); },
      [](const Vector&, const Vector&) { return Vector(Vector::Zero(1)); }, 0.1);
  CHECK(manifold_first_order(zero, vec({3.0}))(0) == 0.0);

  CHECK(manifold_first_order(scalar_family(0.1, false), vec({2.0}))(0) ==
        doctest::Approx(0.2).epsilon(1e-15));

  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  const auto diag = TikhonovSystem(
      1, a, [](const Vector& x, const Vector&) { return Vector(x); },
      [](const Vector&, const Vector&) { return vec({1.0, 1.0}); }, 0.01);
  const Vector y = manifold_first_order(diag, vec({0.0}));
  CHECK(y(0) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(y(1) == doctest::Approx(0.005).epsilon(1e-15));
}

TEST_CASE("second-order manifold examples") {
  const double eps = 0.1;
  const Vector x = vec({1.0});
  CHECK(manifold_second_order(scalar_family(eps, false), x)(0) ==
        doctest::Approx(eps).epsilon(1e-9));
  CHECK(manifold_second_order(scalar_family(eps, true), x)(0) ==
        doctest::Approx(eps + eps * eps).epsilon(1e-9));

  // Exact slow slopes: eps k^2 + k - eps = 0 and eps k^2 + (1 - eps) k - eps = 0.
  for (double e : {0.05, 0.02, 0.01}) {
    const double k0 = (-1.0 + std::sqrt(1.0 + 4.0 * e * e)) / (2.0 * e);
    const double k1 = (-(1.0 - e) + std::sqrt((1.0 - e) * (1.0 - e) + 4.0 * e * e)) / (2.0 * e);
    CHECK(std::abs(manifold_second_order(scalar_family(e, false), x)(0) - k0) <= 1.5 * e * e * e);
    CHECK(std::abs(manifold_second_order(scalar_family(e, true), x)(0) - k1) <= 1e-10 + 3.0 * e * e * e * e);
    CHECK(std::abs(manifold_first_order(scalar_family(e, true), x)(0) - k1) >= 0.9 * e * e);
  }

  // Constant forcing: both Jacobian terms vanish.
  const auto constant = TikhonovSystem(
      2, scalar(3.0), [](const Vector& x, const Vector& y) { return Vector(vec({x(1), y(0)})); },
      [](const Vector&, const Vector&) { return vec({0.7}); }, 0.2);
  const Vector xc = vec({0.4, -1.1});
  CHECK((manifold_second_order(constant, xc) - manifold_first_order(constant, xc)).norm() <= 1e-12);
}

TEST_CASE("reduced vector field examples") {
  const auto decay = TikhonovSystem(
      1, scalar(1.0), [](const Vector& x, const Vector& y) { return Vector(-x + y); },
      [](const Vector&, const Vector&) { return Vector(Vector::Zero(1)); }, 0.1);
  CHECK(reduced_vector_field(decay, vec({2.5}), ExpansionOrder::first)(0) == -2.5);
  CHECK(reduced_vector_field(scalar_family(0.1, false), vec({1.0}), ExpansionOrder::first)(0) ==
        doctest::Approx(0.1).epsilon(1e-15));
  CHECK(reduced_vector_field(scalar_family(0.1, true), vec({1.0}), ExpansionOrder::second)(0) ==
        doctest::Approx(0.11).epsilon(1e-9));
}

TEST_CASE("finite-difference Jacobians match analytic ones") {
  const auto f = [](const Vector& x, const Vector& y) { return Vector(vec({x(0) * y(0), y(1)})); };
  const auto g = [](const Vector& x, const Vector& y) {
    return vec({std::sin(x(0)) + y(0) * y(1), x(1) * x(0) - std::exp(y(1))});
  };
  Matrix a(2, 2);
  a << 2.0, 0.5, -0.5, 1.0;
  TikhonovSystem numeric(2, a, f, g, 0.05);
  const Vector x = vec({0.3, -1.2});
  const Vector y = vec({0.8, 0.1});
  Matrix gx(2, 2), gy(2, 2);
  gx << std::cos(x(0)), 0.0, x(1), x(0);
  gy << y(1), y(0), 0.0, -std::exp(y(1));
  CHECK((numeric.dg_dx(x, y) - gx).norm() <= 1e-8);
  CHECK((numeric.dg_dy(x, y) - gy).norm() <= 1e-8);

  TikhonovSystem analytic = numeric;
  analytic.with_jacobians(
      [](const Vector& xx, const Vector&) {
        Matrix m(2, 2);
        m << std::cos(xx(0)), 0.0, xx(1), xx(0);
        return m;
      },
      [](const Vector&, const Vector& yy) {
        Matrix m(2, 2);
        m << yy(1), yy(0), 0.0, -std::exp(yy(1));
        return m;
      });
  CHECK((manifold_second_order(analytic, x) - manifold_second_order(numeric, x)).norm() <= 1e-9);
}

TEST_CASE("linear systems against the exact invariant subspace") {
  const Linear s = sample_linear();
  const std::vector<double> eps{0.04, 0.02, 0.01, 0.005};
  std::vector<double> r1, r2;
  for (double e : eps) {
    const TikhonovSystem sys = s.system(e);
    const Matrix m = s.exact_slope(e);
    Matrix m1(3, 2), m2(3, 2);
    for (Eigen::Index c = 0; c < 2; ++c) {
      Vector x = Vector::Zero(2);
      x(c) = 1.0;
      m1.col(c) = manifold_first_order(sys, x);
      m2.col(c) = manifold_second_order(sys, x);
    }
    r1.push_back((m - m1).norm());
    r2.push_back((m - m2).norm());
  }
  const double slope1 = fit_loglog(eps, r1).slope;
  const double slope2 = fit_loglog(eps, r2).slope;
  CHECK(slope1 == doctest::Approx(2.0).epsilon(0.05));
  CHECK(slope2 == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("empirical expansion order on the scalar families") {
  const std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
  const Vector x0 = vec({1.0});
  const Vector y0 = vec({0.0});
  const auto plain = [](double e) { return scalar_family(e, false); };
  const auto coupled = [](double e) { return scalar_family(e, true); };

  // g = x: the eps^2 term vanishes, so the first-order remainder is O(eps^3).
  const auto a = verify_expansion_order(plain, eps, x0, y0, 2.0, ExpansionOrder::first);
  CHECK(a.slope >= 2.6);
  CHECK(a.slope <= 3.4);
  const auto b = verify_expansion_order(plain, eps, x0, y0, 2.0, ExpansionOrder::second);
  CHECK(b.slope >= 2.6);
  CHECK(b.slope <= 3.4);

  // g = x + y: first order leaves O(eps^2).
  const auto c = verify_expansion_order(coupled, eps, x0, y0, 2.0, ExpansionOrder::first);
  CHECK(c.slope >= 1.6);
  CHECK(c.slope <= 2.4);

  // Second order on g = x + y: the exact slope is eps + eps^2 - 2 eps^4 + ...,
  // so the eps^3 coefficient is zero and the remainder is O(eps^4).
  const auto d = verify_expansion_order(coupled, eps, x0, y0, 2.0, ExpansionOrder::second);
  CHECK(d.slope >= 3.6);
  CHECK(d.slope <= 4.4);

  const std::vector<double> two{0.1, 0.05};
  CHECK_THROWS_AS(verify_expansion_order(plain, two, x0, y0, 2.0, ExpansionOrder::first),
                  ComputationError);
}

TEST_CASE("hermitian vectorization") {
  Rng rng(31);
  for (std::size_t d = 1; d <= 6; ++d) {
    const ComplexMatrix h = testing::random_hermitian(rng, d);
    const Vector v = vectorize_hermitian(h);
    CHECK(static_cast<std::size_t>(v.size()) == d * d);
    CHECK(devectorize_hermitian(v, d) == h);
  }
  const ComplexMatrix m{{1.0, Complex(2.0, 3.0)}, {Complex(2.0, -3.0), 4.0}};
  const Vector v = vectorize_hermitian(m);
  CHECK(v(0) == 1.0);
  CHECK(v(1) == 4.0);
  CHECK(v(2) == 2.0);
  CHECK(v(3) == 3.0);
  CHECK_THROWS_AS(devectorize_hermitian(v, 3), DimensionMismatch);
}

TEST_CASE("standard form of a Lambda system") {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
    const LambdaParams p = testing::random_lambda(rng, n);
    const LindbladModel m = build_two_scale(p);
    const double eps = 0.3;
    const LindbladStandardForm form = lindblad_standard_form(m, eps);
    CHECK(form.system.dim_slow() == n * n);
    CHECK(form.system.dim_fast() == 1 + 2 * n);

    // The split coordinates reproduce the master equation.
    const ComplexMatrix rho = testing::random_density(rng, n + 1);
    const SlowFastSplit s = split_slow_fast(rho, p.gamma);
    const auto [dx, dy] =
        form.system.rhs(form.slow_coordinates(s.rho_s), form.fast_coordinates(s.rho_f));
    const ComplexMatrix rebuilt =
        merge(SlowFastSplit{form.fast_matrix(dy), form.slow_matrix(dx)}, p.gamma);
    CHECK(max_abs(rebuilt - generator_apply(m, rho, 0.0)) <= 1e-12);

    // First-order manifold against the closed-form fast part.
    const ComplexMatrix rho_s = embed_ground(testing::random_density(rng, n));
    const Vector y = manifold_first_order(form.system, form.slow_coordinates(rho_s));
    const ComplexMatrix closed = rho_f_first_order(rho_s, m.hamiltonian, p.total_gamma());
    CHECK(max_abs(form.fast_matrix(y) - closed) <= 1e-12);
  }
  LindbladModel driven = build_three_scale({10.0, {0.0}, {1.0}, {0.1}, {0.0}, {1.0}});
  CHECK_THROWS_AS(lindblad_standard_form(driven, 0.1), InvalidArgument);
  CHECK_THROWS_AS(lindblad_standard_form(build_two_scale({{0.0}, {1.0}, {1.0}}), 0.0),
                  InvalidArgument);
}
