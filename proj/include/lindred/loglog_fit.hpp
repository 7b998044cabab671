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

#include <algorithm>
#include <cmath>
#include <span>

#include "lindred/errors.hpp"

namespace lindred {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Largest |log10 y - fitted line| over the points.
  double max_log10_deviation = 0.0;
};

/// Least-squares line through (log x, log y).
inline LineFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("fit_loglog: size mismatch");
  if (x.size() < 3) throw InvalidArgument("fit_loglog: need at least 3 points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw InvalidArgument("fit_loglog: values must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) throw InvalidArgument("fit_loglog: abscissae coincide");
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dev = std::log(y[i]) - (fit.intercept + fit.slope * std::log(x[i]));
    fit.max_log10_deviation = std::max(fit.max_log10_deviation, std::abs(dev) / std::log(10.0));
  }
  return fit;
}

}  // namespace lindred
