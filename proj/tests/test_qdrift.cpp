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
#include "eigenforge/metrics.hpp"
#include "eigenforge/qdrift.hpp"
#include "eigenforge/superop.hpp"

#include <doctest.h>

#include <cmath>

using namespace eigenforge;

TEST_CASE("iteration_count hand values") {
  CHECK(iteration_count(1, 1, 0.1) == 100);
  CHECK(iteration_count(2, 1, 0.5) == 80);
  CHECK(iteration_count(1, 0.1, 0.5) == 1);
  CHECK(iteration_count(1, 1, 0.25) == 40);
  CHECK_THROWS_AS(iteration_count(1, 1, 0), InvalidArgument);
  CHECK_THROWS_AS(iteration_count(-1, 1, 0.1), InvalidArgument);
}

TEST_CASE("qdrift bound hand value") {
  CHECK(qdrift_error_bound(1, 1, 100) == doctest::Approx(0.02 * std::exp(0.02)).epsilon(1e-12));
  CHECK(qdrift_error_bound(1, 1, 100) == doctest::Approx(0.02 * std::exp(0.02)).epsilon(1e-12));
}

TEST_CASE("qdrift bound stays below eps at the returned count") {
  for (double lambda : {0.1, 0.5, 1.0, 2.0, 5.0})
    for (double t : {0.1, 0.5, 1.0, 3.0})
      for (double eps : {1.0, 0.5, 0.2, 0.1, 0.05, 0.01}) {
        const std::uint64_t n = iteration_count(lambda, t, eps);
        CHECK(qdrift_error_bound(lambda, t, n) < eps);
      }
}

TEST_CASE("commuting terms reproduce the exact exponential") {
  // H = (1/2) Z + (1/2) Z with unit-norm terms, so every trajectory is e^{-iZt}.
  const Hamiltonian z(pauli_matrix_1q(3));
  auto gen = [z](double tau) { return expm_hermitian(z, tau); };
  const TermMixture mix({Term{0.5, gen, 1}, Term{0.5, gen, 1}});
  CHECK(mix.lambda() == doctest::Approx(1.0));
  Stream rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const TrajectoryRecord r = sample_trajectory(mix, 1.3, 17, rng);
    CHECK((r.unitary - expm_hermitian(z, 1.3)).norm() < 1e-9);
    CHECK(r.queryCount == 17);
  }
}

TEST_CASE("mixture sampling follows the weights") {
  auto id = [](double) { return identity(2); };
  const TermMixture mix({Term{1, id, 1}, Term{3, id, 1}});
  Stream rng(11);
  int hits = 0;
  for (int i = 0; i < 20000; ++i) hits += mix.sample(rng) == 1 ? 1 : 0;
  CHECK(hits / 20000.0 == doctest::Approx(0.75).epsilon(0.02));
}

TEST_CASE("twirl identity") {
  for (int n = 1; n <= 3; ++n)
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Hamiltonian h = random_hamiltonian(n, 500 + s);
      const Operator expect = h.trace_average() * identity(h.dim());
      CHECK(operator_norm(pauli_twirl(h) - expect) <= 1e-10);
    }
}

TEST_CASE("controlized step blocks for H = X, word Z") {
  const Hamiltonian h(pauli_matrix_1q(1));
  const double tau = 0.3;
  const Operator u = controlized_step(h, PauliWord{{3}}, tau);
  const Operator top = expm_hermitian(h, tau);
  const Operator bottom = expm_hermitian(h, -tau);
  CHECK((u.topLeftCorner(2, 2) - top).norm() < 1e-14);
  CHECK((u.bottomRightCorner(2, 2) - bottom).norm() < 1e-14);
  CHECK(u.topRightCorner(2, 2).norm() < 1e-15);
}

TEST_CASE("controlized average Hamiltonian has a trace-only lower block") {
  const Hamiltonian h = random_hamiltonian(2, 4);
  const Operator avg = controlized_average_hamiltonian(h);
  CHECK((avg.topLeftCorner(4, 4) - h.matrix()).norm() < 1e-12);
  CHECK((avg.bottomRightCorner(4, 4) - h.trace_average() * identity(4)).norm() < 1e-12);
}

TEST_CASE("controlization plan counts one query per step") {
  const ControlizationPlan p = make_controlization_plan(1, 1, 0.25);
  CHECK(p.N == 40);
  const Hamiltonian h = random_hamiltonian(1, 2);
  Stream rng(1);
  const TrajectoryRecord r = controlize_trajectory(p, h, rng);
  CHECK(r.queryCount == 40);
  CHECK(unitarity_defect(r.unitary) < 1e-12);
  CHECK(make_controlization_plan(1, 0, 0.1).N == 0);
}

TEST_CASE("controlization channel lies within the qdrift bound of the ideal") {
  for (std::uint64_t s = 0; s < 4; ++s) {
    const Hamiltonian h = random_hamiltonian(1, 40 + s);
    const ControlizationPlan p = make_controlization_plan(1, 1, 0.25);
    const Operator ideal = unitary_superop(
        Operator(std::polar(1.0, -h.trace_average()) * ctrl0(expm_traceless(h, 1.0))));
    const double err = choi_error(ideal, controlization_channel(p, h));
    CHECK(err <= qdrift_error_bound(1, 1, 40));
    CHECK(err <= 0.25);
  }
}

TEST_CASE("average channel matches an empirical trajectory average") {
  const Hamiltonian h = random_hamiltonian(1, 9);
  const ControlizationPlan p = make_controlization_plan(1, 0.5, 0.5);
  const Operator channel = controlization_channel(p, h);
  State in = State::Zero(4);
  in(0) = in(2) = 1 / std::sqrt(2.0);
  const Operator rho = density(in);
  Operator avg = Operator::Zero(4, 4);
  Stream rng(77);
  const int shots = 4000;
  for (int i = 0; i < shots; ++i) {
    const Operator u = controlize_trajectory(p, h, rng).unitary;
    avg += u * rho * u.adjoint();
  }
  avg /= shots;
  CHECK(trace_distance(avg, apply_superop(channel, rho)) < 0.03);
}

TEST_CASE("lower block of a conjugated propagator equals the sandwich product") {
  const Hamiltonian h = random_hamiltonian(2, 3);
  const ConjugatedPropagator prop(h, 0.1);
  for (std::uint64_t w = 0; w < prop.word_count(); ++w) {
    const Operator s = pauli_matrix(pauli_word_from_index(2, w));
    CHECK((prop.conjugated(w) - s * prop.plain() * s).norm() < 1e-13);
  }
}
