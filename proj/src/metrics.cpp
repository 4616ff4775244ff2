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

#include "eigenforge/metrics.hpp"

#include "eigenforge/rng.hpp"
#include "eigenforge/superop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace eigenforge {

namespace {

struct Summary {
  double lo, hi, sd;
};

Summary percentile_summary(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double var = 0;
  for (double v : values) var += (v - mean) * (v - mean);
  const auto at = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::clamp(std::floor(q * (n - 1) + 0.5), 0.0, n - 1));
    return values[idx];
  };
  return {at(0.025), at(0.975), std::sqrt(var / std::max(1.0, n - 1))};
}

void require_count(std::size_t n) {
  if (n < kMinTrajectories) throw InvalidArgument("error estimates need at least 100 trajectories");
}

// Bootstrap resample indices; stream derived from the report seed only.
std::vector<std::size_t> resample(std::size_t n, Stream& rng) {
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = rng.below(n);
  return idx;
}

}  // namespace

std::vector<Operator> reduced_states(const State& target, const std::vector<State>& states) {
  std::vector<Operator> out;
  out.reserve(states.size());
  const Index d = target.size();
  for (const auto& s : states) {
    if (s.size() == d) {
      out.push_back(density(s));
    } else if (s.size() == 2 * d) {
      out.push_back(reduced_system_state(s));
    } else {
      throw InvalidArgument("trajectory state dimension mismatch");
    }
  }
  return out;
}

ErrorEstimate state_error(const State& target, const std::vector<State>& states, std::uint64_t seed) {
  require_count(states.size());
  const auto rhos = reduced_states(target, states);
  const Operator proj = density(target);
  const std::size_t n = rhos.size();
  auto distance_of = [&](const std::vector<std::size_t>* idx) {
    Operator avg = Operator::Zero(proj.rows(), proj.cols());
    for (std::size_t i = 0; i < n; ++i) avg += rhos[idx ? (*idx)[i] : i];
    avg /= static_cast<double>(n);
    return trace_distance(avg, proj);
  };
  ErrorEstimate e;
  e.sampleCount = n;
  e.seed = seed;
  e.pointEstimate = distance_of(nullptr);
  Stream rng = Stream::derive(seed, 0x5e);
  std::vector<double> boot;
  for (int b = 0; b < kBootstrapResamples; ++b) {
    const auto idx = resample(n, rng);
    boot.push_back(distance_of(&idx));
  }
  const Summary s = percentile_summary(boot);
  // The statistic is biased, so the percentile interval is widened to keep
  // the point estimate inside it.
  e.lo = std::min(s.lo, e.pointEstimate);
  e.hi = std::max(s.hi, e.pointEstimate);
  e.standardError = s.sd;
  return e;
}

ErrorEstimate mean_square_error(const State& target, const std::vector<State>& states,
                                std::uint64_t seed) {
  require_count(states.size());
  const auto rhos = reduced_states(target, states);
  const Operator proj = density(target);
  std::vector<double> sq;
  sq.reserve(rhos.size());
  for (const auto& r : rhos) {
    const double d = trace_distance(r, proj);
    sq.push_back(d * d);
  }
  const std::size_t n = sq.size();
  ErrorEstimate e;
  e.sampleCount = n;
  e.seed = seed;
  e.pointEstimate = std::accumulate(sq.begin(), sq.end(), 0.0) / static_cast<double>(n);
  Stream rng = Stream::derive(seed, 0x5f);
  std::vector<double> boot;
  for (int b = 0; b < kBootstrapResamples; ++b) {
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc += sq[rng.below(n)];
    boot.push_back(acc / static_cast<double>(n));
  }
  const Summary s = percentile_summary(boot);
  e.lo = std::min(s.lo, e.pointEstimate);
  e.hi = std::max(s.hi, e.pointEstimate);
  e.standardError = s.sd;
  return e;
}

double choi_error(const Operator& idealSuperop, const Operator& superop) {
  if (idealSuperop.rows() != superop.rows() || idealSuperop.cols() != superop.cols())
    throw InvalidArgument("choi_error: dimension mismatch");
  if (superop.rows() > 4096) throw InvalidArgument("choi_error: instance too large");
  return trace_norm((choi_state(idealSuperop) - choi_state(superop)).eval());
}

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points, std::uint64_t seed) {
  if (points.size() < 4) throw InvalidArgument("fit_scaling: need at least 4 points");
  for (const auto& [eps, count] : points)
    if (!(eps > 0) || !(count > 0)) throw InvalidArgument("fit_scaling: eps and counts must be positive");
  auto fit = [&](const std::vector<std::size_t>& idx, double& slope, double& intercept, double& r2) {
    const double n = static_cast<double>(idx.size());
    double sx = 0, sy = 0;
    for (auto i : idx) {
      sx += std::log(points[i].first);
      sy += std::log(points[i].second);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (auto i : idx) {
      const double dx = std::log(points[i].first) - mx, dy = std::log(points[i].second) - my;
      sxx += dx * dx;
      sxy += dx * dy;
      syy += dy * dy;
    }
    if (sxx <= 1e-300) return false;
    slope = sxy / sxx;
    intercept = my - slope * mx;
    r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return true;
  };
  std::vector<std::size_t> all(points.size());
  std::iota(all.begin(), all.end(), 0);
  ScalingFit f;
  f.points = points;
  if (!fit(all, f.slope, f.intercept, f.r2)) throw InvalidArgument("fit_scaling: degenerate spread in eps");
  double lo = 1e300, hi = 0;
  for (const auto& p : points) {
    lo = std::min(lo, p.first);
    hi = std::max(hi, p.first);
  }
  f.spanDecades = std::log10(hi / lo);
  f.spanOk = f.spanDecades >= 1.5;
  Stream rng = Stream::derive(seed, 0x60);
  std::vector<double> slopes;
  for (int b = 0; b < kBootstrapResamples; ++b) {
    const auto idx = resample(points.size(), rng);
    double s, c, r;
    if (fit(idx, s, c, r)) slopes.push_back(s);
  }
  if (slopes.empty()) {
    f.slopeLo = f.slopeHi = f.slope;
  } else {
    const Summary s = percentile_summary(slopes);
    f.slopeLo = std::min(s.lo, f.slope);
    f.slopeHi = std::max(s.hi, f.slope);
  }
  return f;
}

}  // namespace eigenforge
