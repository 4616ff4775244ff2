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

#include "eigenforge/rng.hpp"

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace eigenforge {

// F(delta) = ceil(log((1 - sqrt8 delta)/2) / log(1 - (1 - sqrt8 delta)^2 / 2)).
std::uint64_t rpe_f(double deltaSup);

struct RpeSchedule {
  int K = 0;
  std::uint64_t F = 0;
  std::vector<std::uint64_t> samples;  // M_j for j = 1..K
  std::uint64_t depth(int j) const { return std::uint64_t{1} << (j - 1); }
};

// K = ceil(log2(3 pi / s)), M_j = F (3 (K - j) + 1).
RpeSchedule rpe_schedule(double s, double deltaSup);

// Success probabilities (p0, p+) of the two measurement families at depth k.
using ProbabilityOracle = std::function<std::pair<double, double>(std::uint64_t depth)>;

struct RpeResult {
  double estimate = 0;  // in (-pi, pi]
  std::vector<double> levelEstimates;
  std::uint64_t measurements = 0;
};

RpeResult rpe_run(const ProbabilityOracle& oracle, const RpeSchedule& schedule, Stream& rng);

double rpe_estimate(const ProbabilityOracle& oracle, double s, double deltaSup, Stream& rng);

// Noiseless probabilities (1 + cos k theta)/2, (1 + sin k theta)/2 shifted by
// the worst-case rotation of size delta, clamped to [0, 1].
ProbabilityOracle adversarial_oracle(double theta, double delta);

double wrap_angle(double a);               // into (-pi, pi]
double circular_distance(double a, double b);

}  // namespace eigenforge
