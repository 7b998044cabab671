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

#include "lindred/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "lindred/errors.hpp"

namespace lindred {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::array kExperiments{
    std::pair{Experiment::simulate_full, "simulate-full"},
    std::pair{Experiment::simulate_slow, "simulate-slow"},
    std::pair{Experiment::compare, "compare"},
    std::pair{Experiment::reduce, "reduce"},
    std::pair{Experiment::sweep_eps, "sweep-eps"},
    std::pair{Experiment::rwa_check, "rwa-check"},
    std::pair{Experiment::dark_state_check, "dark-state-check"},
    std::pair{Experiment::verify_appendix, "verify-appendix"},
};

constexpr std::array kInitialStates{
    std::pair{InitialStateKind::uniform_ground, "uniform_ground"},
    std::pair{InitialStateKind::excited, "excited"},
    std::pair{InitialStateKind::bright, "bright"},
    std::pair{InitialStateKind::dark, "dark"},
};

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) fail("unknown key: " + where + key);
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail("missing key: " + where + key);
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail("expected a number at " + path);
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail("non-finite number at " + path);
  return d;
}

std::vector<double> as_number_array(const json& v, const std::string& path) {
  if (!v.is_array()) fail("expected an array of numbers at " + path);
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> optional_array(const json& obj, const std::string& key,
                                   const std::string& where, std::size_t n) {
  const auto it = obj.find(key);
  if (it == obj.end()) return std::vector<double>(n, 0.0);
  auto out = as_number_array(*it, where + key);
  if (out.size() != n)
    fail(where + key + ": expected " + std::to_string(n) + " entries, got " +
         std::to_string(out.size()));
  return out;
}

std::vector<Complex> combine(const std::vector<double>& re, const std::vector<double>& im,
                             const std::string& re_name, const std::string& im_name) {
  if (re.size() != im.size())
    fail(im_name + ": length " + std::to_string(im.size()) + " differs from " + re_name +
         " length " + std::to_string(re.size()));
  std::vector<Complex> out;
  for (std::size_t i = 0; i < re.size(); ++i) out.emplace_back(re[i], im[i]);
  return out;
}

// Physical validation errors come back as InvalidArgument naming e.g.
// "gamma[1]"; rethrow with the config path.
template <class Params>
void validate_physics(const Params& p) {
  try {
    p.validate();
  } catch (const InvalidArgument& e) {
    fail(std::string("model.") + e.what());
  }
}

LambdaParams parse_lambda(const json& m) {
  const std::string w = "model.";
  reject_unknown_keys(m, {"type", "detuning", "rabi_re", "rabi_im", "gamma"}, w);
  LambdaParams p;
  p.gamma = as_number_array(require(m, "gamma", w), w + "gamma");
  p.detuning = as_number_array(require(m, "detuning", w), w + "detuning");
  const auto re = as_number_array(require(m, "rabi_re", w), w + "rabi_re");
  const auto im = optional_array(m, "rabi_im", w, re.size());
  p.rabi = combine(re, im, "model.rabi_re", "model.rabi_im");
  validate_physics(p);
  return p;
}

ThreeScaleParams parse_three_scale(const json& m) {
  const std::string w = "model.";
  reject_unknown_keys(
      m, {"type", "lambda_e", "lambda_g", "mu", "u_re", "u_im", "detuning", "gamma"}, w);
  ThreeScaleParams p;
  p.lambda_e = as_number(require(m, "lambda_e", w), w + "lambda_e");
  p.lambda_g = as_number_array(require(m, "lambda_g", w), w + "lambda_g");
  p.mu = as_number_array(require(m, "mu", w), w + "mu");
  const auto re = as_number_array(require(m, "u_re", w), w + "u_re");
  const auto im = optional_array(m, "u_im", w, re.size());
  p.u_amp = combine(re, im, "model.u_re", "model.u_im");
  p.detuning = as_number_array(require(m, "detuning", w), w + "detuning");
  p.gamma = as_number_array(require(m, "gamma", w), w + "gamma");
  validate_physics(p);
  return p;
}

ComplexMatrix parse_matrix(const json& v) {
  const std::string w = "initial_state.";
  reject_unknown_keys(v, {"re", "im"}, w);
  const json& re = require(v, "re", w);
  if (!re.is_array() || re.empty()) fail("expected a non-empty array of rows at initial_state.re");
  const std::size_t n = re.size();
  ComplexMatrix m(n);
  const auto im_it = v.find("im");
  for (std::size_t i = 0; i < n; ++i) {
    const auto path = "initial_state.re[" + std::to_string(i) + "]";
    const auto row = as_number_array(re[i], path);
    if (row.size() != n) fail(path + ": matrix must be square");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = row[j];
  }
  if (im_it != v.end()) {
    if (!im_it->is_array() || im_it->size() != n)
      fail("initial_state.im: must have the same shape as initial_state.re");
    for (std::size_t i = 0; i < n; ++i) {
      const auto path = "initial_state.im[" + std::to_string(i) + "]";
      const auto row = as_number_array((*im_it)[i], path);
      if (row.size() != n) fail(path + ": must have the same shape as initial_state.re");
      for (std::size_t j = 0; j < n; ++j) m(i, j) += Complex(0.0, row[j]);
    }
  }
  return m;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

ordered_json real_parts(const std::vector<Complex>& v) {
  auto out = ordered_json::array();
  for (const auto& z : v) out.push_back(z.real());
  return out;
}

ordered_json imag_parts(const std::vector<Complex>& v) {
  auto out = ordered_json::array();
  for (const auto& z : v) out.push_back(z.imag());
  return out;
}

}  // namespace

std::string_view to_string(Experiment e) {
  for (const auto& [k, name] : kExperiments)
    if (k == e) return name;
  return "unknown";
}

std::string_view to_string(InitialStateKind k) {
  for (const auto& [kind, name] : kInitialStates)
    if (kind == k) return name;
  return "explicit";
}

std::string_view to_string(TimeUnits u) {
  return u == TimeUnits::absolute ? "absolute" : "slow_timescale";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (const auto& [k, n] : kExperiments)
    if (name == n) return k;
  return std::nullopt;
}

LambdaParams RunConfig::lambda_params() const {
  if (const auto* p = std::get_if<LambdaParams>(&model)) return *p;
  return rwa_effective(std::get<ThreeScaleParams>(model));
}

RunConfig parse_config(std::string_view text) {
  json doc;
  const bool blank = std::all_of(text.begin(), text.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  });
  if (blank) {
    doc = json::object();
  } else {
    try {
      doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
      const auto [line, col] = line_column(text, e.byte);
      fail("syntax error at line " + std::to_string(line) + ", column " +
           std::to_string(col) + ": " + e.what());
    }
  }
  if (!doc.is_object()) fail("top level must be an object");
  reject_unknown_keys(doc,
                      {"model", "initial_state", "t_end", "t_end_units", "dt", "sample_every",
                       "experiment", "sweep", "output_path"},
                      "");

  RunConfig c;
  const json& model = require(doc, "model", "");
  if (!model.is_object()) fail("expected an object at model");
  const json& type = require(model, "type", "model.");
  if (type == "lambda") {
    c.model = parse_lambda(model);
  } else if (type == "three_scale") {
    c.model = parse_three_scale(model);
  } else {
    fail("model.type must be \"lambda\" or \"three_scale\"");
  }

  if (const auto it = doc.find("initial_state"); it != doc.end()) {
    if (it->is_string()) {
      const auto name = it->get<std::string>();
      const auto found = std::find_if(kInitialStates.begin(), kInitialStates.end(),
                                      [&](const auto& kv) { return name == kv.second; });
      if (found == kInitialStates.end()) fail("initial_state: unknown value \"" + name + "\"");
      c.initial_state = found->first;
    } else if (it->is_object()) {
      c.initial_state = InitialStateKind::explicit_matrix;
      c.explicit_state = parse_matrix(*it);
    } else {
      fail("initial_state must be a string or a {re, im} matrix");
    }
  }

  c.t_end = as_number(require(doc, "t_end", ""), "t_end");
  if (!(c.t_end > 0.0)) fail("t_end must be > 0");

  if (const auto it = doc.find("t_end_units"); it != doc.end()) {
    if (*it == "absolute")
      c.t_end_units = TimeUnits::absolute;
    else if (*it == "slow_timescale")
      c.t_end_units = TimeUnits::slow_timescale;
    else
      fail("t_end_units must be \"absolute\" or \"slow_timescale\"");
  }

  if (const auto it = doc.find("dt"); it != doc.end()) {
    if (it->is_string()) {
      if (*it != "auto") fail("dt must be a positive number or \"auto\"");
    } else {
      c.dt = as_number(*it, "dt");
      if (!(*c.dt > 0.0)) fail("dt must be > 0");
    }
  }

  if (const auto it = doc.find("sample_every"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<long long>() < 1)
      fail("sample_every must be a positive integer");
    c.sample_every = it->get<std::size_t>();
  }

  if (const auto it = doc.find("experiment"); it != doc.end()) {
    if (!it->is_string()) fail("experiment must be a string");
    c.experiment = parse_experiment(it->get<std::string>());
    if (!c.experiment) fail("experiment: unknown value \"" + it->get<std::string>() + "\"");
  }

  if (const auto it = doc.find("sweep"); it != doc.end()) {
    if (!it->is_object()) fail("expected an object at sweep");
    reject_unknown_keys(*it, {"scales"}, "sweep.");
    c.sweep_scales = as_number_array(require(*it, "scales", "sweep."), "sweep.scales");
    for (std::size_t i = 0; i < c.sweep_scales.size(); ++i)
      if (!(c.sweep_scales[i] >= 1.0))
        fail("sweep.scales[" + std::to_string(i) + "] must be >= 1");
  }

  if (const auto it = doc.find("output_path"); it != doc.end()) {
    if (!it->is_string() || it->get<std::string>().empty())
      fail("output_path must be a non-empty string");
    c.output_path = it->get<std::string>();
  }
  return c;
}

std::string render_config(const RunConfig& c) {
  ordered_json doc;
  ordered_json model;
  if (const auto* p = std::get_if<LambdaParams>(&c.model)) {
    model["type"] = "lambda";
    model["detuning"] = p->detuning;
    model["rabi_re"] = real_parts(p->rabi);
    model["rabi_im"] = imag_parts(p->rabi);
    model["gamma"] = p->gamma;
  } else {
    const auto& t = std::get<ThreeScaleParams>(c.model);
    model["type"] = "three_scale";
    model["lambda_e"] = t.lambda_e;
    model["lambda_g"] = t.lambda_g;
    model["mu"] = t.mu;
    model["u_re"] = real_parts(t.u_amp);
    model["u_im"] = imag_parts(t.u_amp);
    model["detuning"] = t.detuning;
    model["gamma"] = t.gamma;
  }
  doc["model"] = model;
  if (c.initial_state == InitialStateKind::explicit_matrix && c.explicit_state) {
    const auto& m = *c.explicit_state;
    auto re = ordered_json::array();
    auto im = ordered_json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
      auto rr = ordered_json::array();
      auto ii = ordered_json::array();
      for (std::size_t j = 0; j < m.dim(); ++j) {
        rr.push_back(m(i, j).real());
        ii.push_back(m(i, j).imag());
      }
      re.push_back(rr);
      im.push_back(ii);
    }
    doc["initial_state"] = {{"re", re}, {"im", im}};
  } else {
    doc["initial_state"] = std::string(to_string(c.initial_state));
  }
  doc["t_end"] = c.t_end;
  doc["t_end_units"] = std::string(to_string(c.t_end_units));
  if (c.dt)
    doc["dt"] = *c.dt;
  else
    doc["dt"] = "auto";
  doc["sample_every"] = c.sample_every;
  if (c.experiment) doc["experiment"] = std::string(to_string(*c.experiment));
  doc["sweep"] = {{"scales", c.sweep_scales}};
  if (!c.output_path.empty()) doc["output_path"] = c.output_path;
  return doc.dump(2) + "\n";
}

bool operator==(const LambdaParams& a, const LambdaParams& b) {
  return a.detuning == b.detuning && a.rabi == b.rabi && a.gamma == b.gamma;
}

bool operator==(const ThreeScaleParams& a, const ThreeScaleParams& b) {
  return a.lambda_e == b.lambda_e && a.lambda_g == b.lambda_g && a.mu == b.mu &&
         a.u_amp == b.u_amp && a.detuning == b.detuning && a.gamma == b.gamma;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.model == b.model && a.initial_state == b.initial_state &&
         a.explicit_state == b.explicit_state && a.t_end == b.t_end &&
         a.t_end_units == b.t_end_units && a.dt == b.dt &&
         a.sample_every == b.sample_every && a.experiment == b.experiment &&
         a.sweep_scales == b.sweep_scales && a.output_path == b.output_path;
}

}  // namespace lindred
