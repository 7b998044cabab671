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

// Fixed-step RK4 integration of master equations and the verification
// experiments built on it.

#include <span>
#include <string>
#include <vector>

#include "lindred/linalg.hpp"
#include "lindred/models.hpp"
#include "lindred/reduction.hpp"

namespace lindred {

/// Tolerances every stored sample must satisfy (trace, positivity).
inline constexpr double kSampleTraceTolerance = 1e-8;
inline constexpr double kSamplePositivityTolerance = 1e-7;
/// Trace drift above which the state is renormalized after a step.
inline constexpr double kRenormalizeThreshold = 1e-12;

struct TrajectoryMeta {
  std::string model;
  double dt = 0.0;  // step actually used (t_end / steps)
  std::size_t steps = 0;
  std::size_t renormalizations = 0;
  // Worst values seen, measured after each raw RK4 step before
  // symmetrization or renormalization.
  double max_trace_drift = 0.0;
  double max_hermiticity_drift = 0.0;
  // Over the stored samples.
  double min_eigenvalue = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
  std::vector<double> outputs;
  TrajectoryMeta meta;

  std::size_t size() const noexcept { return times.size(); }
};

/// L = ||H||_2 + sum_k rate_k |Q_k|_2^2, which is ||H||_2 + sum Gamma_k
/// for the full Lambda model.
double generator_bound(const LindbladModel& m);
/// 0.05 / L
double max_stable_dt(const LindbladModel& m);
/// min(0.05 / L, t_end / 1e4)
double default_dt(const LindbladModel& m, double t_end);

/// RK4 on an undriven model. The grid is uniform with t_end / ceil(t_end/dt)
/// spacing; every sample_every-th step and the final step are stored.
/// Throws InvalidArgument for dt > max_stable_dt(m) or an invalid rho0, and
/// ComputationError if a sample leaves the density-matrix tolerances.
Trajectory integrate(const LindbladModel& m, const DensityMatrix& rho0,
                     double t_end, double dt, std::size_t sample_every);

/// Largest optical frequency |H(0,0) - H(k,k)| of the static Hamiltonian.
double max_optical_frequency(const LindbladModel& m);

/// Same contract for a driven model, with H(t) evaluated at the RK4 stage
/// times; the step bound is dt <= 2 pi / (40 max_k omega_k).
Trajectory integrate_driven(const LindbladModel& m, const DensityMatrix& rho0,
                            double t_end, double dt, std::size_t sample_every);

struct Comparison {
  Trajectory full;
  Trajectory slow;  // states are N x N
  std::vector<double> distance;  // |rho(t) - embed(rho_s(t))|_F per sample
};

/// Full Lambda model against its reduction from the same ground-supported
/// initial state.
Comparison compare_full_vs_slow(const LambdaParams& p,
                                const DensityMatrix& rho0_ground, double t_end,
                                double dt, std::size_t sample_every);

struct SweepPoint {
  double scale = 0.0;
  double epsilon = 0.0;
  double t_end = 0.0;
  double dt = 0.0;
  double sup_distance = 0.0;      // over t >= 5 / (s Gamma_min)
  double sup_distance_all = 0.0;  // over all t
  TrajectoryMeta full_meta;
  TrajectoryMeta slow_meta;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // ordered by increasing scale
  double fitted_slope = 0.0;
  double fit_residual = 0.0;  // max |log10 D - line|
  double fitted_slope_all = 0.0;

  std::vector<double> epsilons() const;
  std::vector<double> sup_distances() const;
};

/// Characteristic slow time Gamma / sum |Omega|^2 of a Lambda system.
double slow_timescale(const LambdaParams& p);

/// eps(s) = (sum |Omega| + sum |delta|) / (s * sum Gamma_base).
double sweep_epsilon(const LambdaParams& base, double scale);

/// For every scale s: Gamma <- s Gamma, t_end = t_end_slow * T_s(scaled),
/// dt = dt_base / s, a sample every round(sample_every * s) steps. Records
/// the sup Frobenius distance past the initial layer and fits log D against
/// log eps. Initial state: maximally mixed ground state.
SweepResult epsilon_sweep(const LambdaParams& base, std::span<const double> scales,
                          double t_end_slow, double dt_base,
                          std::size_t sample_every);

/// |L_s(rho_s)|_F for the reduced generator.
double equilibrium_check(const ReducedModel& rm, const DensityMatrix& rho_s);

}  // namespace lindred
