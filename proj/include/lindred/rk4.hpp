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

namespace lindred {

/// One classical Runge-Kutta step of dy/dt = rhs(y, t). State needs
/// State + State and State * double.
template <class State, class Rhs>
State rk4_step(const State& y, double t, double h, const Rhs& rhs) {
  const State k1 = rhs(y, t);
  const State k2 = rhs(y + k1 * (0.5 * h), t + 0.5 * h);
  const State k3 = rhs(y + k2 * (0.5 * h), t + 0.5 * h);
  const State k4 = rhs(y + k3 * h, t + h);
  return y + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
}

}  // namespace lindred
