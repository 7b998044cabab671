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

#include "lindred/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <set>
#include <sstream>

#include "lindred/errors.hpp"
#include "lindred/loglog_fit.hpp"
#include "lindred/rk4.hpp"

namespace lindred {

namespace {

std::size_t step_count(double t_end, double dt) {
  // Tolerate t_end / dt landing a hair above an integer.
  return static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / dt * (1.0 - 1e-12))));
}

void check_run_args(const LindbladModel& m, const DensityMatrix& rho0,
                    double t_end, double dt, std::size_t sample_every) {
  if (!(t_end > 0.0)) throw InvalidArgument("integrate: t_end must be > 0");
  if (!(dt > 0.0)) throw InvalidArgument("integrate: dt must be > 0");
  if (sample_every == 0) throw InvalidArgument("integrate: sample_every must be >= 1");
  if (rho0.dim() != m.dim())
    throw DimensionMismatch("integrate: initial state dimension does not match model");
}

void record_sample(Trajectory& traj, const LindbladModel& m,
                   const ComplexMatrix& rho, double t) {
  const auto report =
      validate_density(rho, kSampleTraceTolerance, kSamplePositivityTolerance);
  if (!report.accepted) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "integration of " << m.name << " left the density-matrix region at t = " << t
        << ": trace deviation " << report.trace_deviation << ", min eigenvalue "
        << report.min_eigenvalue << ", hermiticity deviation "
        << report.hermiticity_deviation;
    throw ComputationError(msg.str());
  }
  traj.meta.min_eigenvalue = traj.states.empty()
                                 ? report.min_eigenvalue
                                 : std::min(traj.meta.min_eigenvalue, report.min_eigenvalue);
  traj.times.push_back(t);
  traj.states.push_back(rho);
  traj.outputs.push_back(output_full(m, rho));
}

Trajectory run_rk4(const LindbladModel& m, const DensityMatrix& rho0, double t_end,
                   double dt, std::size_t sample_every) {
  const Generator generator(m);
  const std::size_t steps = step_count(t_end, dt);
  const double h = t_end / static_cast<double>(steps);

  Trajectory traj;
  traj.meta.model = m.name;
  traj.meta.dt = h;
  traj.meta.steps = steps;
  const std::size_t expected = steps / sample_every + 2;
  traj.times.reserve(expected);
  traj.states.reserve(expected);
  traj.outputs.reserve(expected);

  ComplexMatrix rho = rho0.matrix();
  record_sample(traj, m, rho, 0.0);
  for (std::size_t i = 1; i <= steps; ++i) {
    const double t0 = static_cast<double>(i - 1) * h;
    rho = rk4_step(rho, t0, h, generator);

    const double drift = std::abs(rho.trace() - 1.0);
    traj.meta.max_trace_drift = std::max(traj.meta.max_trace_drift, drift);
    traj.meta.max_hermiticity_drift =
        std::max(traj.meta.max_hermiticity_drift, hermiticity_deviation(rho));
    rho = hermitian_part(rho);
    if (drift > kRenormalizeThreshold) {
      rho *= 1.0 / rho.trace().real();
      ++traj.meta.renormalizations;
    }
    if (i % sample_every == 0 || i == steps)
      record_sample(traj, m, rho, static_cast<double>(i) * h);
  }
  return traj;
}

}  // namespace

double generator_bound(const LindbladModel& m) {
  // Each dissipator is bounded by rate * |Q|_2^2; for |g_k><e| that is the
  // bare rate.
  double rates = 0.0;
  for (const auto& j : m.jumps)
    rates += j.rate * spectral_norm_hermitian(j.op.adjoint() * j.op);
  return spectral_norm_hermitian(m.hamiltonian) + rates;
}

double max_stable_dt(const LindbladModel& m) { return 0.05 / generator_bound(m); }

double default_dt(const LindbladModel& m, double t_end) {
  return std::min(max_stable_dt(m), t_end / 1e4);
}

Trajectory integrate(const LindbladModel& m, const DensityMatrix& rho0, double t_end,
                     double dt, std::size_t sample_every) {
  check_run_args(m, rho0, t_end, dt, sample_every);
  if (m.drive)
    throw InvalidArgument("integrate: model has a time-dependent drive, use integrate_driven");
  const double dt_max = max_stable_dt(m);
  if (dt > dt_max * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "integrate: dt = " << dt << " exceeds the step bound " << dt_max
        << " (0.05 / L)";
    throw InvalidArgument(msg.str());
  }
  return run_rk4(m, rho0, t_end, dt, sample_every);
}

double max_optical_frequency(const LindbladModel& m) {
  double w = 0.0;
  for (std::size_t k = 1; k < m.dim(); ++k)
    w = std::max(w, std::abs(m.hamiltonian(0, 0).real() - m.hamiltonian(k, k).real()));
  return w;
}

Trajectory integrate_driven(const LindbladModel& m, const DensityMatrix& rho0,
                            double t_end, double dt, std::size_t sample_every) {
  check_run_args(m, rho0, t_end, dt, sample_every);
  const double w = max_optical_frequency(m);
  if (w > 0.0) {
    const double dt_max = 2.0 * std::numbers::pi / (40.0 * w);
    if (dt > dt_max * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "integrate_driven: dt = " << dt << " exceeds 2 pi / (40 omega_max) = " << dt_max;
      throw InvalidArgument(msg.str());
    }
  }
  return run_rk4(m, rho0, t_end, dt, sample_every);
}

Comparison compare_full_vs_slow(const LambdaParams& p, const DensityMatrix& rho0_ground,
                                double t_end, double dt, std::size_t sample_every) {
  p.validate();
  if (rho0_ground.dim() != p.n_ground())
    throw DimensionMismatch("compare_full_vs_slow: initial state must be N-dimensional");
  const LindbladModel full_model = build_two_scale(p);
  const LindbladModel slow_model = reduce_model(full_model).as_lindblad();

  Comparison c;
  c.full = integrate(full_model, DensityMatrix(embed_ground(rho0_ground.matrix())), t_end,
                     dt, sample_every);
  c.slow = integrate(slow_model, rho0_ground, t_end, dt, sample_every);
  c.distance.reserve(c.full.size());
  for (std::size_t i = 0; i < c.full.size(); ++i)
    c.distance.push_back(frobenius_distance(c.full.states[i], embed_ground(c.slow.states[i])));
  return c;
}

double slow_timescale(const LambdaParams& p) {
  const double power = p.rabi_power();
  if (power <= 0.0) throw InvalidArgument("slow_timescale: all Rabi amplitudes vanish");
  return p.total_gamma() / power;
}

double sweep_epsilon(const LambdaParams& base, double scale) {
  double num = 0.0;
  for (std::size_t k = 0; k < base.n_ground(); ++k)
    num += std::abs(base.rabi[k]) + std::abs(base.detuning[k]);
  return num / (scale * base.total_gamma());
}

std::vector<double> SweepResult::epsilons() const {
  std::vector<double> out;
  for (const auto& pt : points) out.push_back(pt.epsilon);
  return out;
}

std::vector<double> SweepResult::sup_distances() const {
  std::vector<double> out;
  for (const auto& pt : points) out.push_back(pt.sup_distance);
  return out;
}

SweepResult epsilon_sweep(const LambdaParams& base, std::span<const double> scales,
                          double t_end_slow, double dt_base, std::size_t sample_every) {
  base.validate();
  if (scales.size() < 4) throw InvalidArgument("epsilon_sweep: at least 4 scale factors required");
  const std::set<double> distinct(scales.begin(), scales.end());
  if (distinct.size() != scales.size())
    throw InvalidArgument("epsilon_sweep: scale factors must be distinct");
  for (double s : scales)
    if (!(s >= 1.0)) throw InvalidArgument("epsilon_sweep: scale factors must be >= 1");
  if (!(t_end_slow > 0.0) || !(dt_base > 0.0))
    throw InvalidArgument("epsilon_sweep: t_end_slow and dt_base must be > 0");

  const double gamma_min = *std::min_element(base.gamma.begin(), base.gamma.end());
  const auto run_one = [&](double s) {
    LambdaParams p = base;
    for (auto& g : p.gamma) g *= s;
    SweepPoint pt;
    pt.scale = s;
    pt.epsilon = sweep_epsilon(base, s);
    pt.t_end = t_end_slow * slow_timescale(p);
    pt.dt = dt_base / s;
    const auto stride =
        static_cast<std::size_t>(std::max(1.0, std::round(static_cast<double>(sample_every) * s)));
    const Comparison c = compare_full_vs_slow(
        p, DensityMatrix::maximally_mixed(p.n_ground()), pt.t_end, pt.dt, stride);
    const double layer_end = 5.0 / (s * gamma_min);
    for (std::size_t i = 0; i < c.distance.size(); ++i) {
      pt.sup_distance_all = std::max(pt.sup_distance_all, c.distance[i]);
      if (c.full.times[i] >= layer_end) pt.sup_distance = std::max(pt.sup_distance, c.distance[i]);
    }
    pt.full_meta = c.full.meta;
    pt.slow_meta = c.slow.meta;
    return pt;
  };

  std::vector<double> ordered(scales.begin(), scales.end());
  std::sort(ordered.begin(), ordered.end());
  std::vector<std::future<SweepPoint>> jobs;
  for (double s : ordered) jobs.push_back(std::async(std::launch::async, run_one, s));

  SweepResult result;
  std::vector<std::string> failures;
  for (auto& job : jobs) {
    try {
      result.points.push_back(job.get());
    } catch (const std::exception& e) {
      failures.push_back(e.what());
    }
  }
  if (result.points.size() < 3) {
    std::string msg = "epsilon_sweep: fewer than 3 successful runs";
    for (const auto& f : failures) msg += "; " + f;
    throw ComputationError(msg);
  }
  const auto eps = result.epsilons();
  const LineFit fit = fit_loglog(eps, result.sup_distances());
  result.fitted_slope = fit.slope;
  result.fit_residual = fit.max_log10_deviation;
  std::vector<double> all;
  for (const auto& pt : result.points) all.push_back(pt.sup_distance_all);
  result.fitted_slope_all = fit_loglog(eps, all).slope;
  return result;
}

double equilibrium_check(const ReducedModel& rm, const DensityMatrix& rho_s) {
  if (rho_s.dim() != rm.n_ground)
    throw DimensionMismatch("equilibrium_check: state dimension does not match reduced model");
  return frobenius_norm(generator_apply(rm.as_lindblad(), rho_s.matrix(), 0.0));
}

}  // namespace lindred
