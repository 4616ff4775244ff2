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

#include "eigenforge/rpe.hpp"

#include "eigenforge/core.hpp"

#include <algorithm>
#include <cmath>

namespace eigenforge {

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double circular_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

std::uint64_t rpe_f(double deltaSup) {
  const double limit = 1.0 / std::sqrt(8.0);
  if (!(deltaSup >= 0) || !(deltaSup < limit))
    throw InvalidArgument("rpe_f: delta must lie in [0, 1/sqrt(8))");
  const double q = 1.0 - std::sqrt(8.0) * deltaSup;
  const double v = std::log(0.5 * q) / std::log(1.0 - 0.5 * q * q);
  return static_cast<std::uint64_t>(std::ceil(v - 1e-12));
}

RpeSchedule rpe_schedule(double s, double deltaSup) {
  if (!(s > 0)) throw InvalidArgument("rpe_schedule: s must be positive");
  RpeSchedule r;
  r.K = std::max(1, static_cast<int>(std::ceil(std::log2(3.0 * kPi / s) - 1e-12)));
  if (r.K > 40) throw InvalidArgument("rpe_schedule: s too small");
  r.F = rpe_f(deltaSup);
  for (int j = 1; j <= r.K; ++j) r.samples.push_back(r.F * static_cast<std::uint64_t>(3 * (r.K - j) + 1));
  return r;
}

RpeResult rpe_run(const ProbabilityOracle& oracle, const RpeSchedule& schedule, Stream& rng) {
  RpeResult res;
  double current = 0;
  for (int j = 1; j <= schedule.K; ++j) {
    const std::uint64_t k = schedule.depth(j);
    const std::uint64_t m = schedule.samples[static_cast<std::size_t>(j - 1)];
    const auto [p0, pp] = oracle(k);
    const double h0 = static_cast<double>(rng.binomial(m, std::clamp(p0, 0.0, 1.0))) / static_cast<double>(m);
    const double hp = static_cast<double>(rng.binomial(m, std::clamp(pp, 0.0, 1.0))) / static_cast<double>(m);
    res.measurements += 2 * m;
    const double phi = std::atan2(2.0 * hp - 1.0, 2.0 * h0 - 1.0);  // estimates k theta mod 2 pi
    if (j == 1) {
      current = phi;
    } else {
      double best = 0, bestDist = 1e300;
      for (std::uint64_t mm = 0; mm < k; ++mm) {
        const double cand = wrap_angle((phi + 2.0 * kPi * static_cast<double>(mm)) / static_cast<double>(k));
        const double dist = circular_distance(cand, current);
        if (dist < bestDist - 1e-15 ||
            (std::abs(dist - bestDist) <= 1e-15 && std::abs(cand) < std::abs(best))) {
          best = cand;
          bestDist = dist;
        }
      }
      current = best;
    }
    res.levelEstimates.push_back(current);
  }
  res.estimate = wrap_angle(current);
  return res;
}

double rpe_estimate(const ProbabilityOracle& oracle, double s, double deltaSup, Stream& rng) {
  return rpe_run(oracle, rpe_schedule(s, deltaSup), rng).estimate;
}

ProbabilityOracle adversarial_oracle(double theta, double delta) {
  return [theta, delta](std::uint64_t k) {
    const double a = static_cast<double>(k) * theta;
    const double p0 = 0.5 * (1.0 + std::cos(a)) - delta * std::sin(a);
    const double pp = 0.5 * (1.0 + std::sin(a)) + delta * std::cos(a);
    return std::make_pair(std::clamp(p0, 0.0, 1.0), std::clamp(pp, 0.0, 1.0));
  };
}

}  // namespace eigenforge
