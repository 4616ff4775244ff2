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

#include "eigenforge/uncompiled.hpp"

#include "eigenforge/controlization.hpp"
#include "eigenforge/qdrift.hpp"
#include "eigenforge/superop.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>

namespace eigenforge {

namespace {

Operator control_phase(double a, Index d) { return kron(z_rotation(a), identity(d)); }

void require_psi(const Hamiltonian& h, const State& psi) {
  if (psi.size() != h.dim()) throw InvalidArgument("input state dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw InvalidArgument("input state is not normalized");
}

std::vector<double> model_weights(const FourierModel& model) {
  std::vector<double> w;
  for (int k = -model.K; k <= model.K; ++k) w.push_back(std::abs(model.coeff(k)));
  return w;
}

}  // namespace

UncompiledPlan plan_subroutine2(const FourierModel& model, double t, double eps) {
  if (!(t > 0) || !(eps > 0)) throw InvalidArgument("plan_subroutine2: t and eps must be positive");
  UncompiledPlan plan;
  plan.t = t;
  plan.eps = eps;
  plan.model = model;
  plan.NF = plan.model.beta > 0 ? iteration_count(plan.model.beta, t, eps / 2.0) : 0;
  return plan;
}

UncompiledPlan plan_algorithm3(const FourierModel& model, double t, double eps) {
  if (!(t > 0) || !(eps > 0)) throw InvalidArgument("plan_algorithm3: t and eps must be positive");
  UncompiledPlan plan;
  plan.t = t;
  plan.eps = eps;
  plan.concatenated = true;
  plan.model = model;
  plan.NF = plan.model.beta > 0 ? iteration_count(plan.model.beta, t, eps / 4.0) : 0;
  plan.innerBudget = plan.NF > 0 ? eps / (4.0 * static_cast<double>(plan.NF)) : 0.0;
  return plan;
}

UncompiledPlan plan_subroutine2(CoefficientCache& cache, double t, double eps) {
  if (!(t > 0) || !(eps > 0)) throw InvalidArgument("plan_subroutine2: t and eps must be positive");
  return plan_subroutine2(select_cutoff(cache, eps / (4.0 * t)), t, eps);
}

UncompiledPlan plan_algorithm3(CoefficientCache& cache, double t, double eps) {
  if (!(t > 0) || !(eps > 0)) throw InvalidArgument("plan_algorithm3: t and eps must be positive");
  return plan_algorithm3(select_cutoff(cache, eps / (8.0 * t)), t, eps);
}

std::uint64_t inner_iteration_count(const UncompiledPlan& plan, int k) {
  if (k == 0) return 0;
  if (!(plan.innerBudget > 0)) throw InvalidArgument("inner_iteration_count: plan has no inner budget");
  return iteration_count(1.0, std::abs(k) * kPi / 2.0, plan.innerBudget);
}

Operator fourier_step_unitary(int k, double phi, double beta, double t, std::uint64_t n,
                              const Operator& q, const Operator& r) {
  if (n == 0) throw InvalidArgument("fourier_step_unitary: N must be positive");
  const Index d = q.rows() / 2;
  const Operator rot = kron(xy_rotation(phi, beta * t / static_cast<double>(n)), identity(d));
  return control_phase(-k * kPi / 4.0, d) * r * rot * q * control_phase(k * kPi / 4.0, d);
}

Operator fourier_step_unitary_exact(const Hamiltonian& h, int k, double phi, double beta,
                                    double t, std::uint64_t n) {
  const double s = k * kPi / 2.0;
  const Operator q = ctrl0(expm_traceless(h, s));
  const Operator r = ctrl0(expm_traceless(h, -s));
  return fourier_step_unitary(k, phi, beta, t, n, q, r);
}

Operator fourier_step_generator(const Hamiltonian& h, int k, double phi) {
  const Index d = h.dim();
  const Operator e = h.traceless_function(
      [k](double x) { return std::polar(1.0, k * kPi * (x + 1.0) / 2.0); });
  Operator g = Operator::Zero(2 * d, 2 * d);
  g.topRightCorner(d, d) = std::polar(1.0, phi) * e;
  g.bottomLeftCorner(d, d) = g.topRightCorner(d, d).adjoint();
  return g;
}

Operator effective_hamiltonian_uncompiled(const Hamiltonian& h, const FourierModel& model) {
  Operator acc = Operator::Zero(2 * h.dim(), 2 * h.dim());
  for (int k = -model.K; k <= model.K; ++k)
    acc += std::abs(model.coeff(k)) * fourier_step_generator(h, k, model.phase(k));
  return acc;
}

Operator truncated_series_operator(const Hamiltonian& h, const FourierModel& model) {
  return h.traceless_function([&model](double x) { return model.evaluate((x + 1.0) / 2.0); });
}

FrequencySampler::FrequencySampler(const FourierModel& model)
    : FrequencySampler(model_weights(model), model.K) {}

FrequencySampler::FrequencySampler(const std::vector<double>& weights, int K) : K_(K) {
  if (static_cast<int>(weights.size()) != 2 * K + 1)
    throw InvalidArgument("FrequencySampler: need 2K+1 weights");
  double total = 0;
  for (double w : weights) total += w;
  if (!(total > 0)) throw InvalidArgument("FrequencySampler: zero total weight");
  double acc = 0;
  for (double w : weights) {
    acc += w / total;
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
}

int FrequencySampler::sample(Stream& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto idx = std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                            static_cast<std::ptrdiff_t>(cumulative_.size()) - 1);
  // Zero-weight entries are never selected by upper_bound except through
  // rounding at the right edge; step back to the last positive one.
  auto i = static_cast<std::size_t>(idx);
  while (i > 0 && cumulative_[i] == cumulative_[i - 1]) --i;
  return static_cast<int>(i) - K_;
}

Stream trajectory_stream(std::uint64_t seed, std::uint64_t w) { return Stream::derive(seed, w); }

State plus_tensor(const State& psi) { return kron(plus_state(), psi); }

TrajectoryBatch run_subroutine2(const UncompiledPlan& plan, const Hamiltonian& h,
                                const State& psi, std::uint64_t trajectories,
                                std::uint64_t seed) {
  require_psi(h, psi);
  const auto& m = plan.model;
  std::vector<Operator> steps;
  for (int k = -m.K; k <= m.K; ++k)
    steps.push_back(plan.NF > 0 ? fourier_step_unitary_exact(h, k, m.phase(k), m.beta, plan.t, plan.NF)
                                : Operator());
  const State start = plus_tensor(psi);
  TrajectoryBatch batch;
  batch.seed = seed;
  std::optional<FrequencySampler> sampler;
  if (plan.NF > 0) sampler.emplace(m);
  for (std::uint64_t w = 0; w < trajectories; ++w) {
    Stream traj = trajectory_stream(seed, w);
    Stream kstream = traj.split(1);
    State s = start;
    std::vector<int> ks;
    ks.reserve(plan.NF);
    for (std::uint64_t step = 0; step < plan.NF; ++step) {
      const int k = sampler->sample(kstream);
      ks.push_back(k);
      s = steps[static_cast<std::size_t>(k + m.K)] * s;
    }
    batch.states.push_back(std::move(s));
    batch.ks.push_back(std::move(ks));
    batch.queries.push_back(0);
    batch.streamKeys.push_back(traj.key());
  }
  return batch;
}

TrajectoryBatch run_algorithm3(const UncompiledPlan& plan, const Hamiltonian& h,
                               const State& psi, std::uint64_t trajectories,
                               std::uint64_t seed) {
  require_psi(h, psi);
  if (!plan.concatenated) throw InvalidArgument("run_algorithm3: plan has no controlization budget");
  const auto& m = plan.model;
  const Index d = h.dim();
  struct PerK {
    std::uint64_t nc = 0;
    Operator topQ, topR, rot, left, right;
    std::unique_ptr<ConjugatedPropagator> propQ, propR;
  };
  std::vector<PerK> per(static_cast<std::size_t>(2 * m.K + 1));
  if (plan.NF > 0) {
    for (int k = -m.K; k <= m.K; ++k) {
      auto& p = per[static_cast<std::size_t>(k + m.K)];
      p.nc = inner_iteration_count(plan, k);
      const double time = k * kPi / 2.0;
      p.rot = xy_rotation(m.phase(k), m.beta * plan.t / static_cast<double>(plan.NF));
      p.left = z_rotation(-k * kPi / 4.0);
      p.right = z_rotation(k * kPi / 4.0);
      if (p.nc > 0) {
        const double tau = time / static_cast<double>(p.nc);
        p.topQ = expm_hermitian(h, time);
        p.topR = expm_hermitian(h, -time);
        p.propQ = std::make_unique<ConjugatedPropagator>(h, tau);
        p.propR = std::make_unique<ConjugatedPropagator>(h, -tau);
      }
    }
  }
  auto apply_control = [d](State& s, const Operator& u2) {
    State a = u2(0, 0) * s.head(d) + u2(0, 1) * s.tail(d);
    State b = u2(1, 0) * s.head(d) + u2(1, 1) * s.tail(d);
    s.head(d) = a;
    s.tail(d) = b;
  };
  auto apply_controlized = [d](State& s, const Operator& top, const ConjugatedPropagator& prop,
                               std::uint64_t steps, Stream& words) {
    State b = s.tail(d);
    State tmp(d);
    for (std::uint64_t i = 0; i < steps; ++i) {
      tmp.noalias() = prop.conjugated(sample_word_index(prop.n(), words)) * b;
      b.swap(tmp);
    }
    s.head(d) = top * s.head(d);
    s.tail(d) = b;
  };
  const State start = plus_tensor(psi);
  TrajectoryBatch batch;
  batch.seed = seed;
  std::optional<FrequencySampler> sampler;
  if (plan.NF > 0) sampler.emplace(m);
  for (std::uint64_t w = 0; w < trajectories; ++w) {
    Stream traj = trajectory_stream(seed, w);
    Stream kstream = traj.split(1);
    Stream words = traj.split(2);
    State s = start;
    std::vector<int> ks;
    std::uint64_t queries = 0;
    for (std::uint64_t step = 0; step < plan.NF; ++step) {
      const int k = sampler->sample(kstream);
      ks.push_back(k);
      const auto& p = per[static_cast<std::size_t>(k + m.K)];
      apply_control(s, p.right);
      if (p.nc > 0) apply_controlized(s, p.topQ, *p.propQ, p.nc, words);
      apply_control(s, p.rot);
      if (p.nc > 0) apply_controlized(s, p.topR, *p.propR, p.nc, words);
      apply_control(s, p.left);
      queries += 2 * p.nc;
    }
    batch.states.push_back(std::move(s));
    batch.ks.push_back(std::move(ks));
    batch.queries.push_back(queries);
    batch.streamKeys.push_back(traj.key());
  }
  return batch;
}

std::vector<std::uint64_t> sample_algorithm3_queries(const UncompiledPlan& plan,
                                                     std::uint64_t trajectories,
                                                     std::uint64_t seed) {
  std::vector<std::uint64_t> out;
  out.reserve(trajectories);
  if (plan.NF == 0) return std::vector<std::uint64_t>(trajectories, 0);
  FrequencySampler sampler(plan.model);
  std::map<int, std::uint64_t> nc;
  for (std::uint64_t w = 0; w < trajectories; ++w) {
    Stream kstream = trajectory_stream(seed, w).split(1);
    std::uint64_t q = 0;
    for (std::uint64_t step = 0; step < plan.NF; ++step) {
      const int k = sampler.sample(kstream);
      auto it = nc.find(k);
      if (it == nc.end()) it = nc.emplace(k, inner_iteration_count(plan, k)).first;
      q += 2 * it->second;
    }
    out.push_back(q);
  }
  return out;
}

Operator subroutine2_average_state(const UncompiledPlan& plan, const Hamiltonian& h,
                                   const State& psi) {
  require_psi(h, psi);
  const Operator rho0 = density(plus_tensor(psi));
  if (plan.NF == 0) return rho0;
  const auto& m = plan.model;
  const Index D = 2 * h.dim();
  Operator step = Operator::Zero(D * D, D * D);
  for (int k = -m.K; k <= m.K; ++k) {
    const double p = m.probability(k);
    if (p == 0) continue;
    step += p * unitary_superop(fourier_step_unitary_exact(h, k, m.phase(k), m.beta, plan.t, plan.NF));
  }
  return apply_superop(superop_power(step, plan.NF), rho0);
}

Operator algorithm3_average_state(const UncompiledPlan& plan, const Hamiltonian& h,
                                  const State& psi) {
  require_psi(h, psi);
  if (!plan.concatenated) throw InvalidArgument("algorithm3_average_state: plan has no controlization budget");
  const Operator rho0 = density(plus_tensor(psi));
  if (plan.NF == 0) return rho0;
  const auto& m = plan.model;
  const Index d = h.dim();
  const Index D = 2 * d;
  Operator step = Operator::Zero(D * D, D * D);
  for (int k = -m.K; k <= m.K; ++k) {
    const double p = m.probability(k);
    if (p == 0) continue;
    const Operator rot = kron(xy_rotation(m.phase(k), m.beta * plan.t / static_cast<double>(plan.NF)),
                              identity(d));
    Operator channel = unitary_superop(control_phase(k * kPi / 4.0, d));
    const std::uint64_t nc = inner_iteration_count(plan, k);
    if (nc > 0) {
      const double tau = (k * kPi / 2.0) / static_cast<double>(nc);
      channel = superop_power(controlization_step_superop(h, tau), nc) * channel;
      channel = unitary_superop(rot) * channel;
      channel = superop_power(controlization_step_superop(h, -tau), nc) * channel;
    } else {
      channel = unitary_superop(rot) * channel;
    }
    channel = unitary_superop(control_phase(-k * kPi / 4.0, d)) * channel;
    step += p * channel;
  }
  return apply_superop(superop_power(step, plan.NF), rho0);
}

UncompiledCost analytic_cost_uncompiled(const UncompiledPlan& plan) {
  UncompiledCost c;
  const auto& m = plan.model;
  double sumK2 = 0;
  for (int k = -m.K; k <= m.K; ++k) sumK2 += std::abs(m.coeff(k)) * k * k;
  c.C3 = m.beta * m.beta * m.beta * sumK2;
  if (plan.NF == 0 || !plan.concatenated) return c;
  double perStep = 0;
  for (int k = -m.K; k <= m.K; ++k)
    perStep += m.probability(k) * 2.0 * static_cast<double>(inner_iteration_count(plan, k));
  c.expectedQueries = static_cast<double>(plan.NF) * perStep;
  return c;
}

}  // namespace eigenforge
