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

#include "eigenforge/controlization.hpp"

#include "eigenforge/superop.hpp"

#include <cmath>

namespace eigenforge {

namespace {

std::uint64_t words_for(int n) { return std::uint64_t{1} << (2 * n); }

Operator block_diag(const Operator& top, const Operator& bottom) {
  const Index d = top.rows();
  Operator out = Operator::Zero(2 * d, 2 * d);
  out.topLeftCorner(d, d) = top;
  out.bottomRightCorner(d, d) = bottom;
  return out;
}

}  // namespace

ControlizationPlan make_controlization_plan(int n, double t, double eps) {
  if (n < 1 || n > 6) throw InvalidArgument("controlization: n must lie in [1, 6]");
  if (!(eps > 0)) throw InvalidArgument("controlization: eps must be positive");
  ControlizationPlan plan{n, t, eps, 0};
  if (t != 0.0) plan.N = iteration_count(1.0, std::abs(t), eps);
  return plan;
}

Operator pauli_twirl(const Hamiltonian& h) {
  if (h.n() > 4) throw InvalidArgument("pauli_twirl: n above 4");
  const std::uint64_t count = words_for(h.n());
  Operator acc = Operator::Zero(h.dim(), h.dim());
  for (std::uint64_t w = 0; w < count; ++w) {
    const Operator s = pauli_matrix(pauli_word_from_index(h.n(), w));
    acc += s * h.matrix() * s;
  }
  return acc / static_cast<double>(count);
}

Operator controlized_step(const Hamiltonian& h, const PauliWord& word, double tau) {
  if (word.size() != h.n()) throw InvalidArgument("controlized_step: word length mismatch");
  const Operator e = expm_hermitian(h, tau);
  const Operator s = pauli_matrix(word);
  return block_diag(e, s * e * s);
}

std::uint64_t sample_word_index(int n, Stream& rng) {
  std::uint64_t index = 0;
  for (int q = 0; q < n; ++q) index = (index << 2U) | rng.below(4);
  return index;
}

PauliWord sample_word(int n, Stream& rng) {
  return pauli_word_from_index(n, sample_word_index(n, rng));
}

TermMixture controlization_mixture(const Hamiltonian& h) {
  const std::uint64_t count = words_for(h.n());
  std::vector<Term> terms;
  terms.reserve(count);
  for (std::uint64_t w = 0; w < count; ++w) {
    PauliWord word = pauli_word_from_index(h.n(), w);
    terms.push_back(Term{1.0 / static_cast<double>(count),
                         [h, word](double tau) { return controlized_step(h, word, tau); }, 1});
  }
  return TermMixture(std::move(terms));
}

ConjugatedPropagator::ConjugatedPropagator(const Hamiltonian& h, double tau)
    : n_(h.n()), tau_(tau), plain_(expm_hermitian(h, tau)) {
  if (n_ > 4) throw InvalidArgument("ConjugatedPropagator: n above 4");
  const std::uint64_t count = words_for(n_);
  conjugated_.reserve(count);
  for (std::uint64_t w = 0; w < count; ++w) {
    const Operator s = pauli_matrix(pauli_word_from_index(n_, w));
    conjugated_.push_back(s * plain_ * s);
  }
}

Operator controlized_lower_block(const ConjugatedPropagator& prop, std::uint64_t steps,
                                 Stream& rng) {
  const Index d = prop.plain().rows();
  Operator acc = Operator::Identity(d, d);
  Operator tmp(d, d);
  for (std::uint64_t m = 0; m < steps; ++m) {
    tmp.noalias() = prop.conjugated(sample_word_index(prop.n(), rng)) * acc;
    acc.swap(tmp);
  }
  return acc;
}

TrajectoryRecord controlize_trajectory(const ControlizationPlan& plan, const Hamiltonian& h,
                                       Stream& rng, ControlVariant variant) {
  if (plan.n != h.n()) throw InvalidArgument("controlize_trajectory: plan/H qubit mismatch");
  TrajectoryRecord rec;
  rec.streamKey = rng.key();
  rec.queryCount = plan.N;
  const Index d = h.dim();
  if (plan.N == 0) {
    rec.unitary = Operator::Identity(2 * d, 2 * d);
    return rec;
  }
  const double tau = plan.t / static_cast<double>(plan.N);
  ConjugatedPropagator prop(h, tau);
  Operator bottom = Operator::Identity(d, d);
  rec.sampledIndices.reserve(plan.N);
  for (std::uint64_t m = 0; m < plan.N; ++m) {
    const std::uint64_t w = sample_word_index(h.n(), rng);
    rec.sampledIndices.push_back(static_cast<std::uint32_t>(w));
    bottom = (prop.conjugated(w) * bottom).eval();
  }
  // The upper block is deterministic: E^N = exp(-i H t).
  const Operator top = expm_hermitian(h, plan.t);
  rec.unitary = variant == ControlVariant::kCtrl0 ? block_diag(top, bottom)
                                                  : block_diag(bottom, top);
  return rec;
}

Operator controlized_average_hamiltonian(const Hamiltonian& h) {
  if (h.n() > 4) throw InvalidArgument("controlized_average_hamiltonian: n above 4");
  const std::uint64_t count = words_for(h.n());
  const Index d = h.dim();
  const Operator doubled = block_diag(h.matrix(), h.matrix());
  Operator acc = Operator::Zero(2 * d, 2 * d);
  for (std::uint64_t w = 0; w < count; ++w) {
    const Operator c = ctrl(pauli_matrix(pauli_word_from_index(h.n(), w)));
    acc += c * doubled * c;
  }
  return acc / static_cast<double>(count);
}

Operator controlization_step_superop(const Hamiltonian& h, double tau) {
  ConjugatedPropagator prop(h, tau);
  const Index d = h.dim();
  Operator acc = Operator::Zero(4 * d * d, 4 * d * d);
  for (std::uint64_t w = 0; w < prop.word_count(); ++w)
    acc += unitary_superop(block_diag(prop.plain(), prop.conjugated(w)));
  return acc / static_cast<double>(prop.word_count());
}

Operator controlization_channel(const ControlizationPlan& plan, const Hamiltonian& h) {
  const Index d = h.dim();
  if (plan.N == 0) return Operator::Identity(4 * d * d, 4 * d * d);
  return superop_power(controlization_step_superop(h, plan.t / static_cast<double>(plan.N)),
                       plan.N);
}

}  // namespace eigenforge
