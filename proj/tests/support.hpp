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

// Random inputs and reference parameter sets shared by the tests.

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "lindred/linalg.hpp"
#include "lindred/models.hpp"

namespace lindred::testing {

using Rng = std::mt19937_64;

inline Complex gaussian_complex(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng), n(rng)};
}

inline ComplexMatrix random_matrix(Rng& rng, std::size_t d) {
  ComplexMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = gaussian_complex(rng);
  return m;
}

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t d) {
  const ComplexMatrix g = random_matrix(rng, d);
  return hermitian_part(g);
}

/// G G^dag / Tr, full rank with probability one.
inline ComplexMatrix random_density(Rng& rng, std::size_t d) {
  const ComplexMatrix g = random_matrix(rng, d);
  ComplexMatrix rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  return hermitian_part(rho);
}

inline KetVector random_ket(Rng& rng, std::size_t d) {
  std::vector<Complex> a;
  for (std::size_t i = 0; i < d; ++i) a.push_back(gaussian_complex(rng));
  return KetVector(std::move(a)).normalized();
}

/// Haar-ish unitary from the QR factor of a Gaussian matrix.
inline ComplexMatrix random_unitary(Rng& rng, std::size_t d) {
  Eigen::MatrixXcd g(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) g(i, j) = gaussian_complex(rng);
  const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(g).householderQ();
  ComplexMatrix u(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) u(i, j) = q(i, j);
  return u;
}

inline LambdaParams random_lambda(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> det(-1.5, 1.5), amp(0.1, 1.5), ph(0.0, 6.283185307179586),
      gam(1.0, 8.0);
  LambdaParams p;
  for (std::size_t k = 0; k < n; ++k) {
    p.detuning.push_back(det(rng));
    p.rabi.push_back(std::polar(amp(rng), ph(rng)));
    p.gamma.push_back(gam(rng));
  }
  return p;
}

/// Four-level reference system of the Figure 2 comparison.
inline LambdaParams four_level() {
  return {{0.5, 1.2, 0.7, 1.0}, {1.0, 1.2, 1.1, 1.3}, {5.0, 4.0, 7.0, 5.0}};
}

inline constexpr double kFourLevelSlowTime = 21.0 / 5.34;

}  // namespace lindred::testing
