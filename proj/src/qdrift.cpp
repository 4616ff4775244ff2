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

#include "eigenforge/qdrift.hpp"

#include "eigenforge/superop.hpp"

#include <algorithm>
#include <cmath>

namespace eigenforge {

std::uint64_t iteration_count(double lambda, double t, double eps) {
  if (!(lambda > 0) || !(t > 0) || !(eps > 0))
    throw InvalidArgument("iteration_count: arguments must be positive");
  const double raw = std::max(10.0 * lambda * lambda * t * t / eps, 2.5 * lambda * t);
  if (!std::isfinite(raw) || raw > 1e18) throw InvalidArgument("iteration_count: overflow");
  // Guard against 100.00000000000001 rounding up to 101.
  const double n = std::ceil(raw * (1.0 - 1e-12));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
}

double qdrift_error_bound(double lambda, double t, std::uint64_t n) {
  if (n == 0) throw InvalidArgument("qdrift_error_bound: N must be positive");
  const double nn = static_cast<double>(n);
  return 2.0 * lambda * lambda * t * t / nn * std::exp(2.0 * lambda * t / nn);
}

TermMixture::TermMixture(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw InvalidArgument("TermMixture: no terms");
  for (const auto& term : terms_) {
    if (!(term.weight > 0)) throw InvalidArgument("TermMixture: weights must be positive");
    if (!term.generator) throw InvalidArgument("TermMixture: missing generator");
    lambda_ += term.weight;
  }
  double acc = 0;
  cumulative_.reserve(terms_.size());
  for (const auto& term : terms_) {
    acc += term.weight / lambda_;
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
}

std::size_t TermMixture::sample(Stream& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                               terms_.size() - 1);
}

TrajectoryRecord sample_trajectory(const TermMixture& mix, double t, std::uint64_t n,
                                   Stream& rng) {
  if (n == 0) throw InvalidArgument("sample_trajectory: N must be positive");
  const double tau = t * mix.lambda() / static_cast<double>(n);
  TrajectoryRecord rec;
  rec.streamKey = rng.key();
  rec.sampledIndices.reserve(n);
  // Step generators are cached per index since tau is fixed along the trajectory.
  std::vector<Operator> cache(mix.size());
  for (std::uint64_t m = 0; m < n; ++m) {
    const std::size_t j = mix.sample(rng);
    if (cache[j].size() == 0) cache[j] = mix.terms()[j].generator(tau);
    if (rec.unitary.size() == 0)
      rec.unitary = cache[j];
    else
      rec.unitary = (cache[j] * rec.unitary).eval();
    rec.sampledIndices.push_back(static_cast<std::uint32_t>(j));
    rec.queryCount += mix.terms()[j].cost;
  }
  return rec;
}

Operator step_channel(const TermMixture& mix, double tau) {
  Operator acc;
  for (std::size_t j = 0; j < mix.size(); ++j) {
    Operator u = mix.terms()[j].generator(tau);
    if (u.rows() > 8) throw InvalidArgument("average_channel: dimension above 8");
    Operator s = mix.probability(j) * unitary_superop(u);
    if (acc.size() == 0)
      acc = s;
    else
      acc += s;
  }
  return acc;
}

Operator average_channel(const TermMixture& mix, double t, std::uint64_t n) {
  if (mix.size() > 64) throw InvalidArgument("average_channel: more than 64 terms");
  if (n == 0) {
    const Index d = mix.terms().front().generator(0.0).rows();
    return Operator::Identity(d * d, d * d);
  }
  const double tau = t * mix.lambda() / static_cast<double>(n);
  return superop_power(step_channel(mix, tau), n);
}

}  // namespace eigenforge
