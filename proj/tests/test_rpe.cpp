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

#include "eigenforge/core.hpp"
#include "eigenforge/rpe.hpp"

#include <doctest.h>

#include <cmath>

using namespace eigenforge;

TEST_CASE("sample multiplier F") {
  CHECK(rpe_f(0.0) == 1);
  CHECK(rpe_f(0.2) == 16);
  CHECK(rpe_f(0.3) == 224);
  CHECK_THROWS_AS(rpe_f(0.36), InvalidArgument);
  CHECK_THROWS_AS(rpe_f(-0.1), InvalidArgument);
}

TEST_CASE("schedule at s = pi") {
  const RpeSchedule r = rpe_schedule(kPi, 0.0);
  CHECK(r.K == 2);
  CHECK(r.F == 1);
  REQUIRE(r.samples.size() == 2);
  CHECK(r.samples[0] == 4);
  CHECK(r.samples[1] == 1);
  CHECK(r.depth(1) == 1);
  CHECK(r.depth(2) == 2);
  CHECK(rpe_schedule(10.0, 0.0).K == 1);
  CHECK_THROWS_AS(rpe_schedule(0.0, 0.0), InvalidArgument);
}

TEST_CASE("angle helpers") {
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(circular_distance(kPi - 0.1, -kPi + 0.1) == doctest::Approx(0.2));
}

TEST_CASE("noiseless oracle recovers the phase exactly at deep levels") {
  Stream rng(1);
  const RpeResult r = rpe_run(adversarial_oracle(1.234, 0.0), rpe_schedule(1e-3, 0.0), rng);
  CHECK(circular_distance(r.estimate, 1.234) < 0.01);
  CHECK(r.levelEstimates.size() == rpe_schedule(1e-3, 0.0).samples.size());
}

TEST_CASE("adversarial oracle stays a probability") {
  const ProbabilityOracle o = adversarial_oracle(2.0, 0.3);
  for (std::uint64_t k = 1; k < 64; k *= 2) {
    const auto [p0, pp] = o(k);
    CHECK(p0 >= 0);
    CHECK(p0 <= 1);
    CHECK(pp >= 0);
    CHECK(pp <= 1);
  }
}

TEST_CASE("RMSE within 1.3 s") {
  for (double delta : {0.0, 0.3})
    for (double s : {0.5, 0.1}) {
      CAPTURE(delta);
      CAPTURE(s);
      Stream rng = Stream::derive(21, 0);
      double se = 0;
      for (int i = 0; i < 200; ++i) {
        const double theta = (2 * rng.uniform() - 1) * kPi;
        const double e = rpe_estimate(adversarial_oracle(theta, delta), s, delta, rng);
        se += std::pow(circular_distance(e, theta), 2);
      }
      CHECK(std::sqrt(se / 200) <= 1.3 * s);
    }
}

TEST_CASE("measurement count") {
  Stream rng(2);
  const RpeSchedule s = rpe_schedule(0.5, 0.2);
  std::uint64_t total = 0;
  for (auto m : s.samples) total += 2 * m;
  CHECK(rpe_run(adversarial_oracle(0.4, 0.0), s, rng).measurements == total);
}
