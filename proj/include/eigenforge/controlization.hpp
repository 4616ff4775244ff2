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
#include "eigenforge/qdrift.hpp"
#include "eigenforge/rng.hpp"

#include <cstdint>
#include <vector>

namespace eigenforge {

struct ControlizationPlan {
  int n = 0;
  double t = 0;  // signed: t < 0 targets exp(+i H0 |t|)
  double eps = 0;
  std::uint64_t N = 0;
};

// N = N(1, |t|, eps); t = 0 gives N = 0 (identity, no queries).
ControlizationPlan make_controlization_plan(int n, double t, double eps);

// (1/4^n) sum_v sigma_v H sigma_v.
Operator pauli_twirl(const Hamiltonian& h);

// ctrl(sigma_v) (I (x) exp(-i H tau)) ctrl(sigma_v).
Operator controlized_step(const Hamiltonian& h, const PauliWord& word, double tau);

// n independent uniform base-4 digits.
PauliWord sample_word(int n, Stream& rng);
std::uint64_t sample_word_index(int n, Stream& rng);

// The 4^n equal-weight mixture of controlized steps; lambda = 1.
TermMixture controlization_mixture(const Hamiltonian& h);

enum class ControlVariant { kCtrl0, kCtrl };

// exp(-i H tau) and sigma_v exp(-i H tau) sigma_v for every word, so that a
// controlized step is the block diagonal pair (E, E_v).
class ConjugatedPropagator {
 public:
  ConjugatedPropagator(const Hamiltonian& h, double tau);

  int n() const { return n_; }
  double tau() const { return tau_; }
  const Operator& plain() const { return plain_; }
  const Operator& conjugated(std::uint64_t word) const { return conjugated_[word]; }
  std::uint64_t word_count() const { return conjugated_.size(); }

 private:
  int n_ = 0;
  double tau_ = 0;
  Operator plain_;
  std::vector<Operator> conjugated_;
};

// Product of plan.N controlized steps; approximates
// exp(-i traceAverage t) ctrl0(exp(-i H0 t)).
TrajectoryRecord controlize_trajectory(const ControlizationPlan& plan, const Hamiltonian& h,
                                       Stream& rng,
                                       ControlVariant variant = ControlVariant::kCtrl0);

// Lower block of a controlized trajectory: prod_m sigma_{v_m} E sigma_{v_m}.
Operator controlized_lower_block(const ConjugatedPropagator& prop, std::uint64_t steps,
                                 Stream& rng);

// (1/4^n) sum_v ctrl(sigma_v) diag(H, H) ctrl(sigma_v).
Operator controlized_average_hamiltonian(const Hamiltonian& h);

// Average superoperator of a single controlized step at time tau.
Operator controlization_step_superop(const Hamiltonian& h, double tau);

// Exact average channel of Subroutine 1 at the plan's N.
Operator controlization_channel(const ControlizationPlan& plan, const Hamiltonian& h);

}  // namespace eigenforge
