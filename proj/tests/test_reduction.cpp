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

#include <cmath>

#include "lindred/errors.hpp"
#include "lindred/models.hpp"
#include "lindred/reduction.hpp"
#include "support.hpp"

using namespace lindred;
using lindred::testing::Rng;

namespace {

ComplexMatrix ket_bra(std::size_t dim, std::size_t i, std::size_t j) {
  ComplexMatrix m(dim);
  m(i, j) = 1.0;
  return m;
}

// Slow right-hand side evaluated in the full space from H, P and the Q_k
// without going through ReducedModel, then restricted to the ground block.
ComplexMatrix slow_rhs_direct(const LambdaParams& p, const ComplexMatrix& rho_s) {
  const std::size_t n = p.n_ground();
  const ComplexMatrix h = build_two_scale(p).hamiltonian;
  const ComplexMatrix one_minus_p = ComplexMatrix::identity(n + 1) - excited_projector(n + 1);
  const ComplexMatrix rho = embed_ground(rho_s);
  const double g = p.total_gamma();
  const ComplexMatrix hs = one_minus_p * h * one_minus_p;
  ComplexMatrix out = commutator(hs, rho) * Complex(0.0, -1.0);
  for (std::size_t k = 0; k < n; ++k) {
    const ComplexMatrix qs = ket_bra(n + 1, k + 1, 0) * h * one_minus_p * Complex(1.0 / g);
    out.add_scaled(dissipator(qs, rho), 2.0 * p.gamma[k]);
  }
  return ground_block(out);
}

// Same right-hand side from the bright-state form:
// -i[H_s, rho] + sum_k gamma_k |g_k><b|rho|b><g_k| - (sum gamma / 2){|b><b|, rho}.
ComplexMatrix slow_rhs_bright(const LambdaParams& p, const ComplexMatrix& rho) {
  const std::size_t n = p.n_ground();
  const double power = p.rabi_power();
  const double g = p.total_gamma();
  std::vector<Complex> amp(p.rabi.begin(), p.rabi.end());
  const KetVector b = KetVector(amp).normalized();
  const ComplexMatrix bb = projector(b);
  ComplexMatrix out = commutator(ComplexMatrix::diagonal(p.detuning), rho) * Complex(0.0, -1.0);
  const Complex pop = expectation(rho, b);
  double gamma_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double gk = 4.0 * p.gamma[k] * power / (g * g);
    gamma_sum += gk;
    out(k, k) += gk * pop;
  }
  out.add_scaled(bb * rho + rho * bb, -0.5 * gamma_sum);
  return out;
}

}  // namespace

TEST_CASE("split examples") {
  const double g11[] = {1.0, 1.0};
  Rng rng(21);
  const ComplexMatrix ground = embed_ground(testing::random_density(rng, 2));
  const SlowFastSplit s0 = split_slow_fast(ground, g11);
  CHECK(max_abs(s0.rho_f) == 0.0);
  CHECK(s0.rho_s == ground);

  const ComplexMatrix ee = projector(KetVector::basis(3, 0));
  const SlowFastSplit s1 = split_slow_fast(ee, g11);
  CHECK(s1.rho_f == ee);
  const double half[] = {0.0, 0.5, 0.5};
  CHECK(s1.rho_s == ComplexMatrix::diagonal(half));
  CHECK(merge(s1, g11) == ee);

  CHECK_THROWS_AS(split_slow_fast(ee, std::vector<double>{1.0}), DimensionMismatch);
  const double bad[] = {1.0, 0.0};
  CHECK_THROWS_AS(split_slow_fast(ee, bad), InvalidArgument);
}

TEST_CASE("split of a general state") {
  Rng rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 7);
    const auto p = testing::random_lambda(rng, n);
    const ComplexMatrix rho = testing::random_density(rng, n + 1);
    const SlowFastSplit s = split_slow_fast(rho, p.gamma);
    for (std::size_t i = 0; i <= n; ++i) {
      CHECK(std::abs(s.rho_s(0, i)) <= 1e-14);
      CHECK(std::abs(s.rho_s(i, 0)) <= 1e-14);
    }
    // rho_f carries exactly the excited row and column.
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 1; j <= n; ++j) CHECK(s.rho_f(i, j) == Complex(0.0));
    CHECK(s.rho_f(0, 0) == rho(0, 0));
    CHECK(hermiticity_deviation(s.rho_s) <= 1e-15);
    CHECK(std::abs(s.rho_s.trace() - 1.0) <= 1e-14);
    CHECK(max_abs(merge(s, p.gamma) - rho) <= 1e-13);
  }
}

TEST_CASE("merge is linear and reverses the trivial split") {
  Rng rng(23);
  const std::vector<double> g{2.0, 3.0, 1.5};
  const ComplexMatrix a = testing::random_density(rng, 4);
  const ComplexMatrix b = testing::random_density(rng, 4);
  const auto sa = split_slow_fast(a, g);
  const auto sb = split_slow_fast(b, g);
  const Complex ca(0.3, 0.0), cb(-1.7, 0.0);
  SlowFastSplit mix{sa.rho_f * ca + sb.rho_f * cb, sa.rho_s * ca + sb.rho_s * cb};
  CHECK(max_abs(merge(mix, g) - (merge(sa, g) * ca + merge(sb, g) * cb)) <= 1e-13);

  const ComplexMatrix ground = embed_ground(testing::random_density(rng, 3));
  CHECK(merge({ComplexMatrix(4), ground}, g) == ground);
}

TEST_CASE("first-order fast part") {
  const LambdaParams p{{0.0, 0.0}, {1.0, 1.0}, {1.0, 1.0}};
  const ComplexMatrix h = build_two_scale(p).hamiltonian;
  const KetVector b = KetVector{1.0, 1.0}.normalized();
  const KetVector d = KetVector{1.0, -1.0}.normalized();

  CHECK(max_abs(rho_f_first_order(embed_ground(projector(b)), ComplexMatrix(3), 2.0)) == 0.0);
  CHECK(max_abs(rho_f_first_order(embed_ground(projector(d)), h, 2.0)) <= 1e-15);

  const ComplexMatrix f = rho_f_first_order(embed_ground(projector(b)), h, 2.0);
  const KetVector e3 = KetVector::basis(3, 0);
  const KetVector b3{0.0, b[0], b[1]};
  const ComplexMatrix expected =
      (outer(e3, b3) - outer(b3, e3)) * Complex(0.0, -std::sqrt(2.0));
  CHECK(max_abs(f - expected) <= 1e-15);
  CHECK(hermiticity_deviation(f) <= 1e-15);
  CHECK(f(0, 0) == Complex(0.0));

  CHECK_THROWS_AS(rho_f_first_order(embed_ground(projector(b)), h, 0.0), InvalidArgument);
  CHECK_THROWS_AS(rho_f_first_order(projector(e3), h, 2.0), InvalidArgument);
  CHECK_THROWS_AS(rho_f_first_order(ComplexMatrix(4), h, 2.0), DimensionMismatch);
}

TEST_CASE("reduce_model examples") {
  const ReducedModel zero = reduce_model(build_two_scale({{0.3, -0.2}, {0.0, 0.0}, {1.0, 2.0}}));
  const double det[] = {0.3, -0.2};
  CHECK(zero.hamiltonian_slow == ComplexMatrix::diagonal(det));
  for (const auto& j : zero.jumps_slow) CHECK(max_abs(j.op) == 0.0);
  CHECK_FALSE(zero.bright_state.has_value());

  const ReducedModel two = reduce_model(build_two_scale({{0.0, 0.0}, {1.0, 1.0}, {1.0, 1.0}}));
  REQUIRE(two.jumps_slow.size() == 2);
  CHECK(two.jumps_slow[0].rate == 4.0);
  CHECK(max_abs(two.jumps_slow[0].op - ComplexMatrix{{0.5, 0.5}, {0.0, 0.0}}) <= 1e-15);
  REQUIRE(two.bright_state.has_value());
  CHECK(std::abs((*two.bright_state)[0] - 1.0 / std::sqrt(2.0)) <= 1e-15);
  CHECK(std::abs((*two.bright_state)[1] - 1.0 / std::sqrt(2.0)) <= 1e-15);

  const ReducedModel four = reduce_model(build_two_scale(testing::four_level()));
  CHECK(four.coupling_power == doctest::Approx(5.34).epsilon(1e-14));
  CHECK(four.total_gamma == 21.0);
  CHECK(four.gamma_slow[0] == doctest::Approx(0.242177).epsilon(1e-6));
  CHECK(four.gamma_slow[0] == doctest::Approx(4.0 * 5.0 * 5.34 / 441.0).epsilon(1e-13));
  CHECK(four.slow_timescale() == doctest::Approx(21.0 / 5.34).epsilon(1e-14));
  double gsum = 0.0;
  for (double g : four.gamma_slow) gsum += g;
  CHECK(gsum == doctest::Approx(4.0 * 5.34 / 21.0).epsilon(1e-13));

  LindbladModel driven = build_three_scale({10.0, {0.0}, {1.0}, {0.1}, {0.0}, {1.0}});
  CHECK_THROWS_AS(reduce_model(driven), InvalidArgument);
  LindbladModel off = build_two_scale({{0.0, 0.0}, {1.0, 1.0}, {1.0, 1.0}});
  off.jumps[1].op = off.jumps[0].op;
  CHECK_THROWS_AS(reduce_model(off), InvalidArgument);
}

TEST_CASE("reduced model structure on random Lambda systems") {
  Rng rng(24);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
    const LambdaParams p = testing::random_lambda(rng, n);
    const ReducedModel rm = reduce_model(build_two_scale(p));
    const double g = p.total_gamma();
    const double power = p.rabi_power();
    std::vector<Complex> amp(p.rabi.begin(), p.rabi.end());
    const ComplexMatrix pbar_closed = projector(KetVector(amp).normalized()) * Complex(power / (g * g));

    CHECK(hermiticity_deviation(rm.hamiltonian_slow) == 0.0);
    CHECK(max_abs(rm.p_bar - pbar_closed) <= 1e-12);
    for (const auto& j : rm.jumps_slow) {
      CHECK(max_abs(j.op.adjoint() * j.op - rm.p_bar) <= 1e-12);
      // Rank one: every 2x2 minor vanishes.
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = r + 1; s < n; ++s)
          for (std::size_t c = 0; c < n; ++c)
            for (std::size_t e = c + 1; e < n; ++e)
              CHECK(std::abs(j.op(r, c) * j.op(s, e) - j.op(r, e) * j.op(s, c)) <= 1e-15);
    }
    double gsum = 0.0;
    for (double gk : rm.gamma_slow) gsum += gk;
    CHECK(gsum == doctest::Approx(4.0 * power / g).epsilon(1e-13));

    // Generator consistency against two independent right-hand sides.
    const LindbladModel slow = rm.as_lindblad();
    for (int s = 0; s < 3; ++s) {
      const ComplexMatrix rho = testing::random_density(rng, n);
      const ComplexMatrix got = generator_apply(slow, rho, 0.0);
      CHECK(max_abs(got - slow_rhs_direct(p, rho)) <= 1e-12);
      CHECK(max_abs(got - slow_rhs_bright(p, rho)) <= 1e-12);
    }
  }
}

TEST_CASE("slow output") {
  const LambdaParams p{{0.0, 0.0}, {0.8, Complex(0.6, 0.3)}, {3.0, 2.0}};
  const ReducedModel rm = reduce_model(build_two_scale(p));
  const auto bd = bright_dark_states(p.rabi);
  double gsum = 0.0;
  for (double g : rm.gamma_slow) gsum += g;
  CHECK(slow_output(rm, DensityMatrix::pure(bd.dark_basis[0])) == 0.0);
  CHECK(slow_output(rm, DensityMatrix::pure(bd.bright)) == doctest::Approx(gsum).epsilon(1e-14));
  CHECK(slow_output(rm, DensityMatrix::maximally_mixed(2)) ==
        doctest::Approx(gsum / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(slow_output(rm, DensityMatrix::maximally_mixed(3)), DimensionMismatch);

  Rng rng(25);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
    const LambdaParams q = testing::random_lambda(rng, n);
    const ReducedModel r = reduce_model(build_two_scale(q));
    const ComplexMatrix rho = testing::random_density(rng, n);
    double trace_form = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      trace_form += 4.0 * q.gamma[k] *
                    (r.jumps_slow[k].op.adjoint() * r.jumps_slow[k].op * rho).trace().real();
    CHECK(std::abs(slow_output(r, rho) - trace_form) <= 1e-12);
  }
}

TEST_CASE("bright and dark states") {
  const std::vector<Complex> a{1.0, 0.0};
  const auto sa = bright_dark_states(a);
  CHECK(sa.bright == KetVector{1.0, 0.0});
  REQUIRE(sa.dark_basis.size() == 1);
  CHECK(sa.dark_basis[0] == KetVector{0.0, 1.0});

  const std::vector<Complex> b{1.0, 1.0};
  const auto sb = bright_dark_states(b);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(sb.bright[0] - r) + std::abs(sb.bright[1] - r) <= 1e-15);
  CHECK(std::abs(std::abs(inner(sb.dark_basis[0], KetVector{r, -r})) - 1.0) <= 1e-15);

  const std::vector<Complex> c{1.0, kI};
  const auto sc = bright_dark_states(c);
  CHECK(std::abs(sc.bright[0] - r) + std::abs(sc.bright[1] - Complex(0.0, r)) <= 1e-15);
  CHECK(std::abs(inner(sc.bright, sc.dark_basis[0])) <= 1e-14);

  CHECK_THROWS_AS(bright_dark_states(std::vector<Complex>{0.0, 0.0}), InvalidArgument);

  Rng rng(26);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 7);
    const auto p = testing::random_lambda(rng, n);
    const auto s = bright_dark_states(p.rabi);
    REQUIRE(s.dark_basis.size() == n - 1);
    std::vector<KetVector> all{s.bright};
    all.insert(all.end(), s.dark_basis.begin(), s.dark_basis.end());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j)
        CHECK(std::abs(inner(all[i], all[j]) - (i == j ? 1.0 : 0.0)) <= 1e-13);
      // First nonzero component real and positive.
      for (std::size_t k = 0; k < n; ++k)
        if (std::abs(all[i][k]) > 1e-12) {
          CHECK(all[i][k].real() > 0.0);
          CHECK(all[i][k].imag() == 0.0);
          break;
        }
    }
    // Deterministic.
    CHECK(bright_dark_states(p.rabi).dark_basis == s.dark_basis);
  }
}

TEST_CASE("decoherence-free subspace at zero detuning") {
  Rng rng(27);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 4);
    LambdaParams p = testing::random_lambda(rng, n);
    std::fill(p.detuning.begin(), p.detuning.end(), 0.0);
    const ReducedModel rm = reduce_model(build_two_scale(p));
    const auto dark = bright_dark_states(p.rabi).dark_basis;
    // A random state on the dark subspace.
    const ComplexMatrix mix = testing::random_density(rng, dark.size());
    ComplexMatrix rho(n);
    for (std::size_t i = 0; i < dark.size(); ++i)
      for (std::size_t j = 0; j < dark.size(); ++j) rho.add_scaled(outer(dark[i], dark[j]), mix(i, j));
    rho = hermitian_part(rho);
    CHECK(frobenius_norm(generator_apply(rm.as_lindblad(), rho, 0.0)) <= 1e-13);
    CHECK(slow_output(rm, rho) == 0.0);
  }
}

TEST_CASE("common phase of the Rabi amplitudes") {
  Rng rng(28);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 4);
    const LambdaParams p = testing::random_lambda(rng, n);
    LambdaParams q = p;
    const Complex phase = std::polar(1.0, 0.1 + 0.2 * trial);
    for (auto& w : q.rabi) w *= phase;
    const ReducedModel a = reduce_model(build_two_scale(p));
    const ReducedModel b = reduce_model(build_two_scale(q));
    CHECK(max_abs(a.hamiltonian_slow - b.hamiltonian_slow) <= 1e-15);
    CHECK(max_abs(a.p_bar - b.p_bar) <= 1e-13);
    CHECK(max_abs(projector(*a.bright_state) - projector(*b.bright_state)) <= 1e-13);
    CHECK(max_abs(a.jumps_slow[0].op - b.jumps_slow[0].op) > 1e-6);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(a.gamma_slow[k] == doctest::Approx(b.gamma_slow[k]).epsilon(1e-13));
      const ComplexMatrix& qa = a.jumps_slow[k].op;
      const ComplexMatrix& qb = b.jumps_slow[k].op;
      CHECK(max_abs(qa.adjoint() * qa - qb.adjoint() * qb) <= 1e-13);
    }
  }
}

TEST_CASE("reconstruction of the full state") {
  const LambdaParams p0{{0.3, 0.1}, {0.0, 0.0}, {1.0, 2.0}};
  Rng rng(29);
  const ComplexMatrix r = testing::random_density(rng, 2);
  CHECK(reconstruct_full(DensityMatrix(r), build_two_scale(p0)) == embed_ground(r));

  const LambdaParams pd{{0.0, 0.0}, {0.8, Complex(0.6, 0.3)}, {3.0, 2.0}};
  const KetVector d = bright_dark_states(pd.rabi).dark_basis[0];
  CHECK(max_abs(reconstruct_full(DensityMatrix::pure(d), build_two_scale(pd)) -
                embed_ground(projector(d))) <= 1e-15);

  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
    const LambdaParams p = testing::random_lambda(rng, n);
    const ComplexMatrix rho = reconstruct_full(DensityMatrix(testing::random_density(rng, n)),
                                               build_two_scale(p));
    CHECK(std::abs(rho.trace() - 1.0) <= 1e-12);
    CHECK(hermiticity_deviation(rho) <= 1e-15);
  }
}
