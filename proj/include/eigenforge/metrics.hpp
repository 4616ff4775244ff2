// Copyright 2026 The eigenforge Authors
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

#include "eigenforge/core.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace eigenforge {

inline constexpr int kBootstrapResamples = 200;
inline constexpr std::size_t kMinTrajectories = 100;

struct ErrorEstimate {
  double pointEstimate = 0;
  double lo = 0;  // 95% percentile bootstrap interval
  double hi = 0;
  double standardError = 0;  // bootstrap standard deviation
  std::size_t sampleCount = 0;
  std::uint64_t seed = 0;
};

// Per-trajectory density operators on the system: states of the target's
// dimension are used as they are, states of twice that dimension have their
// leading control qubit traced out.
std::vector<Operator> reduced_states(const State& target, const std::vector<State>& states);

// || avg_w rho_w - |target><target| ||_1.
ErrorEstimate state_error(const State& target, const std::vector<State>& states,
                          std::uint64_t seed = 0);

// avg_w || rho_w - |target><target| ||_1^2.
ErrorEstimate mean_square_error(const State& target, const std::vector<State>& states,
                                std::uint64_t seed = 0);

// || J(a) - J(b) ||_1 for the Choi states of two superoperators.
double choi_error(const Operator& idealSuperop, const Operator& superop);

struct ScalingFit {
  std::vector<std::pair<double, double>> points;  // (eps, count)
  double slope = 0;
  double intercept = 0;
  double slopeLo = 0;
  double slopeHi = 0;
  double r2 = 0;
  double spanDecades = 0;
  bool spanOk = false;  // at least 1.5 decades in eps
  bool accepted(double minR2 = 0.95) const { return r2 >= minR2; }
};

// Least squares on log-log axes with a pairs-bootstrap interval for the slope.
ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points,
                       std::uint64_t seed = 0);

}  // namespace eigenforge
