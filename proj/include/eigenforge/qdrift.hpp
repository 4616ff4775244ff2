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
#include "eigenforge/rng.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace eigenforge {

// ceil(max(10 lambda^2 t^2 / eps, 5 lambda t / 2)), at least 1.
std::uint64_t iteration_count(double lambda, double t, double eps);

// (2 lambda^2 t^2 / N) exp(2 lambda t / N).
double qdrift_error_bound(double lambda, double t, std::uint64_t n);

struct Term {
  double weight = 0;
  // Returns exp(-i H_j tau); tau may be negative.
  std::function<Operator(double tau)> generator;
  std::uint64_t cost = 1;
};

class TermMixture {
 public:
  TermMixture() = default;
  explicit TermMixture(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  double lambda() const { return lambda_; }
  double probability(std::size_t j) const { return terms_[j].weight / lambda_; }

  // Index drawn with probability h_j / lambda.
  std::size_t sample(Stream& rng) const;

 private:
  std::vector<Term> terms_;
  std::vector<double> cumulative_;
  double lambda_ = 0;
};

struct TrajectoryRecord {
  Operator unitary;
  std::vector<std::uint32_t> sampledIndices;
  std::uint64_t queryCount = 0;
  std::uint64_t streamKey = 0;
};

// U_N ... U_1 with every step evaluated at tau = t lambda / N.
TrajectoryRecord sample_trajectory(const TermMixture& mix, double t, std::uint64_t n, Stream& rng);

// (sum_j p_j U_j (x) conj(U_j))^N.
Operator average_channel(const TermMixture& mix, double t, std::uint64_t n);

// Single-step average map sum_j p_j U_j (x) conj(U_j) at time tau.
Operator step_channel(const TermMixture& mix, double tau);

}  // namespace eigenforge
