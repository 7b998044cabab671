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

#include "lindred/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lindred/errors.hpp"
#include "lindred/models.hpp"
#include "lindred/reduction.hpp"
#include "lindred/sim.hpp"
#include "lindred/tikhonov.hpp"

namespace lindred {

namespace {

constexpr double kDarkGeneratorTolerance = 1e-13;
constexpr double kDarkFullOutputTolerance = 1e-6;
constexpr double kRwaTolerance = 0.05;
constexpr double kAppendixCrossTolerance = 1e-10;

// Scalar Tikhonov family dx/dt = y, dy/dt = -y/eps + x + y and its probe.
constexpr std::array kAppendixEpsilons{0.1, 0.05, 0.025, 0.0125};
constexpr double kAppendixProbeTime = 2.0;

[[noreturn]] void fail_config(const std::string& msg) { throw ConfigError(msg); }

std::string format_complex(Complex z) {
  std::string s = format_double(z.real());
  if (z.imag() != 0.0) {
    if (!std::signbit(z.imag())) s += '+';
    s += format_double(z.imag()) + "i";
  }
  return s;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[v & 0xF];
    v >>= 4;
  }
  buf[16] = '\0';
  return buf;
}

class Csv {
 public:
  explicit Csv(std::string_view header) { text_.append(header).push_back('\n'); }

  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) text_.push_back(',');
      first = false;
      text_ += format_double(v);
    }
    text_.push_back('\n');
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) text_.push_back(',');
      text_ += format_double(values[i]);
    }
    text_.push_back('\n');
  }

  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
};

// Summary text: a [meta] block followed by "key: value" lines.
class Summary {
 public:
  Summary(const RunConfig& c, Experiment e) {
    line("[meta]");
    kv("tool_version", std::string(kToolVersion));
    kv("experiment", std::string(to_string(e)));
    kv("config_hash", hex64(fnv1a64(render_config(c))));
  }

  void run_meta(double dt, std::size_t steps, std::size_t renormalizations) {
    kv("dt", format_double(dt));
    kv("steps", std::to_string(steps));
    kv("renormalizations", std::to_string(renormalizations));
    line("[result]");
  }

  void kv(std::string_view key, const std::string& value) {
    text_.append(key).append(": ").append(value).push_back('\n');
  }
  void kv(std::string_view key, double value) { kv(key, format_double(value)); }
  void check(std::string_view label, bool ok) {
    text_.append(label).append(ok ? ": PASS\n" : ": FAIL\n");
    passed_ = passed_ && ok;
  }
  void line(std::string_view s) { text_.append(s).push_back('\n'); }

  const std::string& text() const noexcept { return text_; }
  bool passed() const noexcept { return passed_; }

 private:
  std::string text_;
  bool passed_ = true;
};

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += format_double(v[i]);
  }
  return s;
}

std::string join(const std::vector<Complex>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += format_complex(v[i]);
  }
  return s;
}

std::vector<Complex> amplitudes(const KetVector& k) {
  std::vector<Complex> out;
  for (std::size_t i = 0; i < k.dim(); ++i) out.push_back(k[i]);
  return out;
}

// Run context shared by the experiments.
struct Context {
  const RunConfig& config;
  Experiment experiment;
  LambdaParams lambda;  // the config's model or its rotating-wave form
  double t_end = 0.0;   // absolute units
};

Context make_context(const RunConfig& c) {
  if (!c.experiment) fail_config("missing key: experiment");
  if (c.output_path.empty())
    fail_config("missing key: output_path (set it in the config or pass --out)");
  Context ctx{c, *c.experiment, c.lambda_params(), c.t_end};
  if (c.t_end_units == TimeUnits::slow_timescale) {
    if (ctx.lambda.rabi_power() <= 0.0)
      fail_config("t_end_units slow_timescale needs a nonzero Rabi amplitude");
    ctx.t_end = c.t_end * slow_timescale(ctx.lambda);
  }
  return ctx;
}

KetVector dark_state(const LambdaParams& p) {
  const auto bd = bright_dark_states(p.rabi);
  if (bd.dark_basis.empty())
    fail_config("initial_state dark needs at least two ground states");
  return bd.dark_basis.front();
}

// N-dimensional initial state for the reduced model and comparisons.
DensityMatrix ground_state(const Context& ctx) {
  const std::size_t n = ctx.lambda.n_ground();
  switch (ctx.config.initial_state) {
    case InitialStateKind::uniform_ground:
      return DensityMatrix::maximally_mixed(n);
    case InitialStateKind::excited:
      fail_config("initial_state excited is not supported on the ground space");
    case InitialStateKind::bright:
      return DensityMatrix::pure(bright_dark_states(ctx.lambda.rabi).bright);
    case InitialStateKind::dark:
      return DensityMatrix::pure(dark_state(ctx.lambda));
    case InitialStateKind::explicit_matrix: {
      const ComplexMatrix& m = *ctx.config.explicit_state;
      if (m.dim() == n) return DensityMatrix(m);
      if (m.dim() == n + 1) {
        for (std::size_t i = 0; i <= n; ++i)
          if (std::abs(m(0, i)) > 0.0 || std::abs(m(i, 0)) > 0.0)
            fail_config("initial_state must be ground-supported for this experiment");
        return DensityMatrix(ground_block(m));
      }
      fail_config("initial_state: dimension " + std::to_string(m.dim()) +
                  " does not match " + std::to_string(n) + " ground states");
    }
  }
  fail_config("initial_state: unsupported value");
}

// (N+1)-dimensional initial state for the full model.
DensityMatrix full_state(const Context& ctx) {
  const std::size_t n = ctx.lambda.n_ground();
  const auto& c = ctx.config;
  if (c.initial_state == InitialStateKind::excited)
    return DensityMatrix::pure(KetVector::basis(n + 1, 0));
  if (c.initial_state == InitialStateKind::explicit_matrix && c.explicit_state->dim() == n + 1)
    return DensityMatrix(*c.explicit_state);
  return DensityMatrix(embed_ground(ground_state(ctx).matrix()));
}

double undriven_dt(const Context& ctx, const LindbladModel& m) {
  return ctx.config.dt ? *ctx.config.dt : default_dt(m, ctx.t_end);
}

double driven_dt(const Context& ctx, const LindbladModel& m) {
  if (ctx.config.dt) return *ctx.config.dt;
  double dt = ctx.t_end / 1e4;
  const double w = max_optical_frequency(m);
  if (w > 0.0) dt = std::min(dt, 2.0 * std::numbers::pi / (40.0 * w));
  return dt;
}

std::string populations_header(std::size_t n) {
  std::string h = "t,y,pop_e";
  for (std::size_t k = 1; k <= n; ++k) h += ",pop_g" + std::to_string(k);
  return h;
}

// Rows t, y, pop_e, pop_g...; a ground-only trajectory reports pop_e = 0.
std::string population_csv(const Trajectory& tr, std::size_t n, bool ground_only) {
  Csv csv(populations_header(n));
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const ComplexMatrix& rho = tr.states[i];
    std::vector<double> row{tr.times[i], tr.outputs[i], ground_only ? 0.0 : rho(0, 0).real()};
    const std::size_t off = ground_only ? 0 : 1;
    for (std::size_t k = 0; k < n; ++k) row.push_back(rho(k + off, k + off).real());
    csv.row(row);
  }
  return csv.text();
}

void trajectory_summary(Summary& s, const std::string& prefix, const Trajectory& tr) {
  s.kv(prefix + "samples", std::to_string(tr.size()));
  s.kv(prefix + "y_final", tr.outputs.back());
  s.kv(prefix + "y_max", *std::max_element(tr.outputs.begin(), tr.outputs.end()));
  s.kv(prefix + "max_trace_drift", tr.meta.max_trace_drift);
  s.kv(prefix + "max_hermiticity_drift", tr.meta.max_hermiticity_drift);
  s.kv(prefix + "min_eigenvalue", tr.meta.min_eigenvalue);
}

struct Artifacts {
  std::string main;
  Summary summary;
};

void add_warnings(Summary& s, const Context& ctx) {
  if (const auto* t = std::get_if<ThreeScaleParams>(&ctx.config.model))
    for (const auto& w : t->regime_warnings()) s.kv("warning", w);
  for (const auto& w : separation_warnings(ctx.lambda)) s.kv("warning", w);
}

Artifacts simulate_full(const Context& ctx) {
  Summary s(ctx.config, ctx.experiment);
  Trajectory tr;
  if (const auto* t = std::get_if<ThreeScaleParams>(&ctx.config.model)) {
    const LindbladModel m = build_three_scale(*t);
    tr = m.drive ? integrate_driven(m, full_state(ctx), ctx.t_end, driven_dt(ctx, m),
                                    ctx.config.sample_every)
                 : integrate(m, full_state(ctx), ctx.t_end, undriven_dt(ctx, m),
                             ctx.config.sample_every);
  } else {
    const LindbladModel m = build_two_scale(ctx.lambda);
    tr = integrate(m, full_state(ctx), ctx.t_end, undriven_dt(ctx, m), ctx.config.sample_every);
  }
  s.run_meta(tr.meta.dt, tr.meta.steps, tr.meta.renormalizations);
  add_warnings(s, ctx);
  s.kv("t_end", ctx.t_end);
  trajectory_summary(s, "", tr);
  return {population_csv(tr, ctx.lambda.n_ground(), false), s};
}

Artifacts simulate_slow(const Context& ctx) {
  Summary s(ctx.config, ctx.experiment);
  const LindbladModel m = reduce_model(build_two_scale(ctx.lambda)).as_lindblad();
  const Trajectory tr =
      integrate(m, ground_state(ctx), ctx.t_end, undriven_dt(ctx, m), ctx.config.sample_every);
  s.run_meta(tr.meta.dt, tr.meta.steps, tr.meta.renormalizations);
  add_warnings(s, ctx);
  s.kv("t_end", ctx.t_end);
  trajectory_summary(s, "", tr);
  return {population_csv(tr, ctx.lambda.n_ground(), true), s};
}

// Comparison on the dt both models accept.
Comparison run_comparison(const Context& ctx, const DensityMatrix& rho0) {
  const LindbladModel full = build_two_scale(ctx.lambda);
  return compare_full_vs_slow(ctx.lambda, rho0, ctx.t_end, undriven_dt(ctx, full),
                              ctx.config.sample_every);
}

std::string comparison_csv(const Comparison& c) {
  Csv csv("t,y_full,y_slow,dist_frobenius");
  for (std::size_t i = 0; i < c.full.size(); ++i)
    csv.row({c.full.times[i], c.full.outputs[i], c.slow.outputs[i], c.distance[i]});
  return csv.text();
}

Artifacts compare(const Context& ctx) {
  Summary s(ctx.config, ctx.experiment);
  const Comparison c = run_comparison(ctx, ground_state(ctx));
  s.run_meta(c.full.meta.dt, c.full.meta.steps,
             c.full.meta.renormalizations + c.slow.meta.renormalizations);
  add_warnings(s, ctx);
  s.kv("t_end", ctx.t_end);
  s.kv("slow_timescale", ctx.lambda.rabi_power() > 0.0 ? slow_timescale(ctx.lambda)
                                                       : INFINITY);
  trajectory_summary(s, "full_", c.full);
  trajectory_summary(s, "slow_", c.slow);
  double y_max = 0.0, y_gap = 0.0;
  for (std::size_t i = 0; i < c.full.size(); ++i) {
    y_max = std::max(y_max, c.full.outputs[i]);
    y_gap = std::max(y_gap, std::abs(c.full.outputs[i] - c.slow.outputs[i]));
  }
  s.kv("max_abs_y_difference", y_gap);
  s.kv("max_dist_frobenius", *std::max_element(c.distance.begin(), c.distance.end()));
  return {comparison_csv(c), s};
}

nlohmann::ordered_json matrix_json(const ComplexMatrix& m) {
  auto re = nlohmann::ordered_json::array();
  auto im = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    auto rr = nlohmann::ordered_json::array();
    auto ii = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) {
      rr.push_back(m(i, j).real());
      ii.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"re", re}, {"im", im}};
}

void matrix_lines(Summary& s, const ComplexMatrix& m) {
  for (std::size_t i = 0; i < m.dim(); ++i) {
    std::string row = "  ";
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (j) row += ' ';
      row += format_complex(m(i, j));
    }
    s.line(row);
  }
}

Artifacts reduce(const Context& ctx) {
  Summary s(ctx.config, ctx.experiment);
  const ReducedModel rm = reduce_model(build_two_scale(ctx.lambda));
  s.run_meta(0.0, 0, 0);
  add_warnings(s, ctx);
  s.kv("n_ground", std::to_string(rm.n_ground));
  s.kv("total_gamma", rm.total_gamma);
  s.kv("coupling_power", rm.coupling_power);
  s.kv("slow_timescale", rm.slow_timescale());
  std::vector<double> diag;
  for (std::size_t k = 0; k < rm.n_ground; ++k) diag.push_back(rm.hamiltonian_slow(k, k).real());
  s.kv("hamiltonian_slow_diagonal", join(diag));
  s.line("hamiltonian_slow:");
  matrix_lines(s, rm.hamiltonian_slow);
  s.kv("gamma_slow", join(rm.gamma_slow));
  double gamma_sum = 0.0;
  for (double g : rm.gamma_slow) gamma_sum += g;
  s.kv("gamma_slow_sum", gamma_sum);
  s.kv("bright_state", rm.bright_state ? join(amplitudes(*rm.bright_state)) : "none");
  for (std::size_t k = 0; k < rm.jumps_slow.size(); ++k) {
    s.kv("jump_slow[" + std::to_string(k + 1) + "].rate", rm.jumps_slow[k].rate);
    s.line("jump_slow[" + std::to_string(k + 1) + "].operator:");
    matrix_lines(s, rm.jumps_slow[k].op);
  }

  nlohmann::ordered_json doc;
  doc["n_ground"] = rm.n_ground;
  doc["total_gamma"] = rm.total_gamma;
  doc["coupling_power"] = rm.coupling_power;
  doc["slow_timescale"] = rm.coupling_power > 0.0 ? nlohmann::ordered_json(rm.slow_timescale())
                                                  : nlohmann::ordered_json(nullptr);
  doc["hamiltonian_slow"] = matrix_json(rm.hamiltonian_slow);
  doc["gamma_slow"] = rm.gamma_slow;
  doc["p_bar"] = matrix_json(rm.p_bar);
  if (rm.bright_state) {
    auto re = nlohmann::ordered_json::array();
    auto im = nlohmann::ordered_json::array();
    for (const auto& z : amplitudes(*rm.bright_state)) {
      re.push_back(z.real());
      im.push_back(z.imag());
    }
    doc["bright_state"] = {{"re", re}, {"im", im}};
  } else {
    doc["bright_state"] = nullptr;
  }
  auto jumps = nlohmann::ordered_json::array();
  for (const auto& j : rm.jumps_slow)
    jumps.push_back({{"rate", j.rate}, {"operator", matrix_json(j.op)}});
  doc["jumps_slow"] = jumps;
  return {doc.dump(2) + "\n", s};
}

Artifacts sweep(const Context& ctx) {
  Summary s(ctx.config, ctx.experiment);
  if (ctx.lambda.rabi_power() <= 0.0) fail_config("sweep-eps needs a nonzero Rabi amplitude");
  const double t_end_slow = ctx.t_end / slow_timescale(ctx.lambda);
  const double dt_base =
      ctx.config.dt ? *ctx.config.dt : default_dt(build_two_scale(ctx.lambda), ctx.t_end);
  const SweepResult r = epsilon_sweep(ctx.lambda, ctx.config.sweep_scales, t_end_slow, dt_base,
                                      ctx.config.sample_every);
  std::size_t steps = 0, renorm = 0;
  for (const auto& pt : r.points) {
    steps += pt.full_meta.steps;
    renorm += pt.full_meta.renormalizations + pt.slow_meta.renormalizations;
  }
  s.run_meta(dt_base, steps, renorm);
  add_warnings(s, ctx);
  s.kv("t_end_slow_units", t_end_slow);
  s.kv("points", std::to_string(r.points.size()));
  s.kv("fitted_slope", r.fitted_slope);
  s.kv("fit_residual_log10", r.fit_residual);
  s.kv("fitted_slope_all_t", r.fitted_slope_all);
  for (const auto& pt : r.points) {
    s.line("point: scale " + format_double(pt.scale) + " epsilon " + format_double(pt.epsilon) +
           " t_end " + format_double(pt.t_end) + " dt " + format_double(pt.dt) +
           " sup_distance " + format_double(pt.sup_distance) + " sup_distance_all_t " +
           format_double(pt.sup_distance_all));
  }
  Csv csv("epsilon,sup_distance");
  for (const auto& pt : r.points) csv.row({pt.epsilon, pt.sup_distance});
  return {csv.text(), s};
}

Artifacts rwa_check(const Context& ctx) {
  const auto* t = std::get_if<ThreeScaleParams>(&ctx.config.model);
  if (!t) fail_config("rwa-check needs model.type three_scale");
  Summary s(ctx.config, ctx.experiment);
  const LindbladModel lab = build_three_scale(*t);
  const LindbladModel rot = build_two_scale(ctx.lambda);
  const double dt =
      ctx.config.dt ? *ctx.config.dt : std::min(driven_dt(ctx, lab), max_stable_dt(rot));
  const DensityMatrix rho0 = full_state(ctx);
  const Trajectory a = lab.drive
                           ? integrate_driven(lab, rho0, ctx.t_end, dt, ctx.config.sample_every)
                           : integrate(lab, rho0, ctx.t_end, dt, ctx.config.sample_every);
  const Trajectory b = integrate(rot, rho0, ctx.t_end, dt, ctx.config.sample_every);
  s.run_meta(a.meta.dt, a.meta.steps, a.meta.renormalizations + b.meta.renormalizations);
  add_warnings(s, ctx);
  Csv csv("t,pop_e_driven,pop_e_rwa,abs_diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double pa = a.states[i](0, 0).real();
    const double pb = b.states[i](0, 0).real();
    worst = std::max(worst, std::abs(pa - pb));
    csv.row({a.times[i], pa, pb, std::abs(pa - pb)});
  }
  s.kv("t_end", ctx.t_end);
  s.kv("max_abs_diff_pop_e", worst);
  s.check("max_abs_diff_pop_e<=0.05", worst <= kRwaTolerance);
  return {csv.text(), s};
}

Artifacts dark_state_check(const Context& ctx) {
  Summary s(ctx.config, ctx.experiment);
  const LindbladModel full = build_two_scale(ctx.lambda);
  const ReducedModel rm = reduce_model(full);
  const KetVector d = dark_state(ctx.lambda);
  const DensityMatrix rho_d = DensityMatrix::pure(d);
  const double norm = equilibrium_check(rm, rho_d);
  const double y_slow = slow_output(rm, rho_d);
  const Comparison c = run_comparison(ctx, rho_d);
  const double y_full_max = *std::max_element(c.full.outputs.begin(), c.full.outputs.end());
  const double y_slow_max = *std::max_element(c.slow.outputs.begin(), c.slow.outputs.end());

  s.run_meta(c.full.meta.dt, c.full.meta.steps,
             c.full.meta.renormalizations + c.slow.meta.renormalizations);
  add_warnings(s, ctx);
  s.kv("dark_state", join(amplitudes(d)));
  s.kv("generator_norm", norm);
  s.check("generator_norm<=1e-13", norm <= kDarkGeneratorTolerance);
  s.kv("y_slow", y_slow);
  s.kv("y_slow_max", y_slow_max);
  s.kv("y_full_max", y_full_max);
  s.check("y_slow==0", y_slow == 0.0 && y_slow_max == 0.0);
  s.check("y_full_max<=1e-6", y_full_max <= kDarkFullOutputTolerance);
  return {comparison_csv(c), s};
}

tikhonov::TikhonovSystem appendix_family(double eps) {
  using tikhonov::Vector;
  tikhonov::Matrix a(1, 1);
  a(0, 0) = 1.0;
  return tikhonov::TikhonovSystem(
      1, a, [](const Vector&, const Vector& y) { return Vector(y); },
      [](const Vector& x, const Vector& y) { return Vector(x + y); }, eps);
}

// The manifold of the vectorized Lindblad system against the closed-form
// first-order fast part, on the basis projectors and the configured state.
double appendix_cross_check(const Context& ctx) {
  const LindbladModel m = build_two_scale(ctx.lambda);
  const double eps = sweep_epsilon(ctx.lambda, 1.0);
  const auto form = tikhonov::lindblad_standard_form(m, eps);
  const std::size_t n = ctx.lambda.n_ground();
  std::vector<ComplexMatrix> states;
  for (std::size_t k = 0; k < n; ++k) states.push_back(projector(KetVector::basis(n, k)));
  if (ctx.config.initial_state != InitialStateKind::excited)
    states.push_back(ground_state(ctx).matrix());
  double worst = 0.0;
  for (const auto& rho_s : states) {
    const ComplexMatrix embedded = embed_ground(rho_s);
    const auto y = tikhonov::manifold_first_order(form.system, form.slow_coordinates(embedded));
    const ComplexMatrix via_kit = form.fast_matrix(y);
    const ComplexMatrix closed =
        rho_f_first_order(embedded, m.hamiltonian, ctx.lambda.total_gamma());
    worst = std::max(worst, max_abs(via_kit - closed));
  }
  return worst;
}

Artifacts verify_appendix(const Context& ctx) {
  Summary s(ctx.config, ctx.experiment);
  tikhonov::Vector x0(1), y0(1);
  x0 << 1.0;
  y0 << 0.0;
  const auto o1 = tikhonov::verify_expansion_order(appendix_family, kAppendixEpsilons, x0, y0,
                                                   kAppendixProbeTime,
                                                   tikhonov::ExpansionOrder::first);
  const auto o2 = tikhonov::verify_expansion_order(appendix_family, kAppendixEpsilons, x0, y0,
                                                   kAppendixProbeTime,
                                                   tikhonov::ExpansionOrder::second);
  const double cross = appendix_cross_check(ctx);
  s.run_meta(0.0, 0, 0);
  s.kv("family", "dx/dt = y, dy/dt = -y/eps + x + y, x(0) = 1, y(0) = 0, t_probe = 2");
  s.kv("slope_order1", o1.slope);
  s.kv("slope_order2", o2.slope);
  s.check("slope_order1 in [1.6, 2.4]", o1.slope >= 1.6 && o1.slope <= 2.4);
  s.check("slope_order2 in [2.6, 3.4]", o2.slope >= 2.6 && o2.slope <= 3.4);
  s.kv("lindblad_cross_check_max_abs", cross);
  s.check("lindblad_cross_check<=1e-10", cross <= kAppendixCrossTolerance);

  Csv csv("epsilon,residual_order1,residual_order2");
  if (o1.epsilons != o2.epsilons)
    throw ComputationError("verify-appendix: residual grids differ between orders");
  for (std::size_t i = 0; i < o1.epsilons.size(); ++i)
    csv.row({o1.epsilons[i], o1.residuals[i], o2.residuals[i]});
  return {csv.text(), s};
}

Artifacts dispatch(const Context& ctx) {
  switch (ctx.experiment) {
    case Experiment::simulate_full: return simulate_full(ctx);
    case Experiment::simulate_slow: return simulate_slow(ctx);
    case Experiment::compare: return compare(ctx);
    case Experiment::reduce: return reduce(ctx);
    case Experiment::sweep_eps: return sweep(ctx);
    case Experiment::rwa_check: return rwa_check(ctx);
    case Experiment::dark_state_check: return dark_state_check(ctx);
    case Experiment::verify_appendix: return verify_appendix(ctx);
  }
  fail_config("experiment: unsupported value");
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = fs::path(path + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename " + tmp.string() + " to " + path);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  if (is.bad()) throw IoError("read failed: " + path);
  return ss.str();
}

RunReport execute(const RunConfig& c) {
  const Context ctx = make_context(c);
  Artifacts a = dispatch(ctx);
  const std::string summary_path = c.output_path + ".summary.txt";
  write_file_atomic(c.output_path, a.main);
  write_file_atomic(summary_path, a.summary.text());
  RunReport r;
  r.files = {c.output_path, summary_path};
  r.summary = a.summary.text();
  r.checks_passed = a.summary.passed();
  return r;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    const RunReport r = execute(c);
    out << r.summary;
    return r.checks_passed ? kExitOk : kExitCheckFailed;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ComputationError& e) {
    err << "computation error: " << e.what() << '\n';
    return kExitComputation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitComputation;
  }
}

}  // namespace lindred
