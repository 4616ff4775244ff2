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
#include "eigenforge/fourier.hpp"
#include "eigenforge/rng.hpp"

#include <cstdint>
#include <vector>

namespace eigenforge {

struct UncompiledPlan {
  FourierModel model;
  double t = 0;
  double eps = 0;
  std::uint64_t NF = 0;
  double innerBudget = 0;     // controlization error per use; 0 for standalone
  bool concatenated = false;  // true when Q and R come from controlization
};

// Cutoff target eps/(4t), NF = N(beta, t, eps/2).
UncompiledPlan plan_subroutine2(CoefficientCache& cache, double t, double eps);
// Cutoff target eps/(8t), NF = N(beta, t, eps/4), inner budget eps/(4 NF).
UncompiledPlan plan_algorithm3(CoefficientCache& cache, double t, double eps);

// Same plans from a model already cut off at the matching target.
UncompiledPlan plan_subroutine2(const FourierModel& model, double t, double eps);
UncompiledPlan plan_algorithm3(const FourierModel& model, double t, double eps);

// N^(C)_k = N(1, |k| pi/2, innerBudget); 0 for k = 0.
std::uint64_t inner_iteration_count(const UncompiledPlan& plan, int k);

// (e^{ik pi Z/4} (x) I) R (rot (x) I) Q (e^{-ik pi Z/4} (x) I) with
// rot = exp(-i [cos(phi) X - sin(phi) Y] beta t / N).
Operator fourier_step_unitary(int k, double phi, double beta, double t, std::uint64_t n,
                              const Operator& q, const Operator& r);

// Same, with Q = ctrl0(e^{-ik pi H0/2}) and R = ctrl0(e^{ik pi H0/2}).
Operator fourier_step_unitary_exact(const Hamiltonian& h, int k, double phi, double beta,
                                    double t, std::uint64_t n);

// [[0, e^{i phi} E_k], [h.c., 0]] with E_k = exp(ik pi (H0 + I)/2).
Operator fourier_step_generator(const Hamiltonian& h, int k, double phi);

// sum_k |c_k| fourier_step_generator(k, phi_k).
Operator effective_hamiltonian_uncompiled(const Hamiltonian& h, const FourierModel& model);

// sum_k c_k exp(ik pi (H0 + I)/2), i.e. the truncated series at (H0 + I)/2.
Operator truncated_series_operator(const Hamiltonian& h, const FourierModel& model);

// Index of k in [-K, K] drawn with probability |c_k| / beta.
class FrequencySampler {
 public:
  explicit FrequencySampler(const FourierModel& model);
  explicit FrequencySampler(const std::vector<double>& weights, int K);
  int sample(Stream& rng) const;

 private:
  int K_ = 0;
  std::vector<double> cumulative_;
};

struct TrajectoryBatch {
  std::vector<State> states;  // pre-trace states on H_c (x) H
  std::vector<std::vector<int>> ks;
  std::vector<std::uint64_t> queries;
  std::vector<std::uint64_t> streamKeys;
  std::uint64_t seed = 0;
};

// Stream layout shared by all trajectory runners: trajectory w uses
// derive(seed, w); frequencies come from split(1), Pauli words from split(2).
Stream trajectory_stream(std::uint64_t seed, std::uint64_t w);

TrajectoryBatch run_subroutine2(const UncompiledPlan& plan, const Hamiltonian& h,
                                const State& psi, std::uint64_t trajectories,
                                std::uint64_t seed);

// Q and R replaced by sampled controlization trajectories.
TrajectoryBatch run_algorithm3(const UncompiledPlan& plan, const Hamiltonian& h,
                               const State& psi, std::uint64_t trajectories,
                               std::uint64_t seed);

// Query counts of run_algorithm3 without simulating any unitary.
std::vector<std::uint64_t> sample_algorithm3_queries(const UncompiledPlan& plan,
                                                     std::uint64_t trajectories,
                                                     std::uint64_t seed);

// Exact average over all randomness of the control-plus-system state.
Operator subroutine2_average_state(const UncompiledPlan& plan, const Hamiltonian& h,
                                   const State& psi);
Operator algorithm3_average_state(const UncompiledPlan& plan, const Hamiltonian& h,
                                  const State& psi);

struct UncompiledCost {
  double expectedQueries = 0;  // NF sum_k p_k 2 N^(C)_k
  double C3 = 0;               // beta^3 sum |c_k| k^2
};

UncompiledCost analytic_cost_uncompiled(const UncompiledPlan& plan);

// |+> (x) psi.
State plus_tensor(const State& psi);

}  // namespace eigenforge
