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

#include "eigenforge/compiled.hpp"
#include "eigenforge/metrics.hpp"
#include "eigenforge/qdrift.hpp"

#include <doctest.h>

#include <cmath>

using namespace eigenforge;

namespace {

struct Fixture {
  PeriodicExtension ext;
  CoefficientCache cache;
  explicit Fixture(const std::string& f) : ext(make_target_function(f)), cache(ext) {}
};

Operator word_block(const Hamiltonian& h, int k, std::uint64_t M, const PauliWord& w) {
  const Operator e = expm_hermitian(h, k * kPi / (2.0 * static_cast<double>(M)));
  const Operator c = ctrl(pauli_matrix(w));
  return c * kron(identity(2), e) * c;
}

}  // namespace

TEST_CASE("correction closed form for H0 = Z") {
  const Hamiltonian z(pauli_matrix_1q(3));
  const CorrectionPair c = correction_exact(z, 1, 10);
  CHECK(c.A == doctest::Approx(std::pow(std::cos(kPi / 20), 10)).epsilon(1e-14));
  CHECK(c.A == doctest::Approx(0.8835).epsilon(1e-4));
  CHECK(std::abs(c.theta) < 1e-15);
  CHECK(c.A >= 1 - kPi * kPi / 80);
  for (int k = 1; k <= 4; ++k) {
    const CorrectionPair ck = correction_exact(z, k, compiled_inner_steps(k));
    CHECK(ck.A == doctest::Approx(std::pow(std::cos(kPi / (20.0 * k)), 10.0 * k * k)).epsilon(1e-13));
  }
  const CorrectionPair zero = correction_exact(z, 0, 10);
  CHECK(zero.A == 1.0);
  CHECK(zero.theta == 0.0);
  CHECK_THROWS_AS(correction_exact(z, 1, 0), InvalidArgument);
}

TEST_CASE("correction values for the n=2 seed=7 fixture") {
  // Trace formula evaluated independently with a dense matrix exponential.
  const Hamiltonian h = random_hamiltonian(2, 7);
  const double A[3] = {0.9391155492560651, 0.9391808111681258, 0.9391928697234918};
  const double th[3] = {0.00043176834697101704, 0.00021520643227462545, 0.0001433875920514484};
  for (int k = 1; k <= 3; ++k) {
    const CorrectionPair c = correction_exact(h, k, compiled_inner_steps(k));
    CHECK(c.A == doctest::Approx(A[k - 1]).epsilon(1e-12));
    CHECK(c.theta == doctest::Approx(th[k - 1]).epsilon(1e-9));
  }
}

TEST_CASE("correction bounds") {
  for (int n = 1; n <= 3; ++n)
    for (std::uint64_t s = 0; s < 6; ++s) {
      const Hamiltonian h = random_hamiltonian(n, 700 + s);
      for (int k = 1; k <= 6; ++k) {
        const CorrectionPair c = correction_exact(h, k, compiled_inner_steps(k));
        CHECK(c.A >= 1 - kPi * kPi / 80);
        CHECK(c.A <= 1);
        CHECK(std::abs(c.theta) <= std::pow(kPi, 3) / (3200.0 * k));
        for (std::uint64_t M : {3ULL, 7ULL, 25ULL}) {
          if (M < 0.625 * kPi * k) continue;
          const CorrectionPair g = correction_exact(h, k, M);
          const double N = static_cast<double>(M);
          CHECK(g.A >= 1 - kPi * kPi * k * k / (8 * N));
          CHECK(std::abs(g.theta) <= std::pow(kPi * k, 3) / (32 * N * N));
        }
      }
    }
}

TEST_CASE("W operator for words (Z, X) matches an explicit product") {
  const Hamiltonian h = random_hamiltonian(1, 3);
  const std::vector<PauliWord> words = {PauliWord{{3}}, PauliWord{{1}}};
  const Operator expect = word_block(h, 1, 2, words[1]) * word_block(h, 1, 2, words[0]) *
                          kron(z_rotation(kPi / 4), identity(2));
  CHECK((w_operator(h, 1, words) - expect).norm() < 1e-13);
}

TEST_CASE("lemma D1 by enumeration") {
  const Hamiltonian h1 = random_hamiltonian(1, 3), h2 = random_hamiltonian(2, 7);
  CHECK(verify_lemma_d1(h1, 1, 2, 0.3) <= 1e-10);
  CHECK(verify_lemma_d1(h1, 2, 2, 0.3) <= 1e-10);
  CHECK(verify_lemma_d1(h1, 1, 3, 0.3) <= 1e-10);
  CHECK(verify_lemma_d1(h2, 1, 2, 0.3) <= 1e-10);
  CHECK(verify_lemma_d1(h2, -2, 2, 1.3) <= 1e-10);
  CHECK_THROWS_AS(verify_lemma_d1(h2, 1, 6, 0.3), InvalidArgument);
}

TEST_CASE("superoperator average reproduces the lemma at M = 10k^2") {
  const Hamiltonian h = random_hamiltonian(2, 7);
  const double phi = 0.3;
  Operator g(2, 2);
  g << 0, std::polar(1.0, phi), std::polar(1.0, -phi), 0;
  for (int k : {1, 3}) {
    const std::uint64_t M = compiled_inner_steps(k);
    const Operator avg = averaged_w_sandwich(h, k, M, g);
    CHECK(operator_norm(avg - lemma_d1_rhs(h, correction_exact(h, k, M), phi)) < 1e-11);
  }
}

TEST_CASE("correction tables") {
  const Hamiltonian h = random_hamiltonian(1, 3);
  const CorrectionTable t = exact_correction_table(h, 3);
  CHECK(t.K == 3);
  CHECK(t.entries.size() == 7);
  CHECK(t.at(0).A == 1.0);
  for (int k = 1; k <= 3; ++k) {
    CHECK(t.at(-k).A == doctest::Approx(t.at(k).A));
    CHECK(t.at(-k).theta == doctest::Approx(-t.at(k).theta));
  }
  CHECK_THROWS_AS(t.at(4), InvalidArgument);
  Stream rng(1);
  const CorrectionTable o = estimate_corrections(h, 3, 0.2, 1, rng, CorrectionMode::kOracle);
  for (int k = -3; k <= 3; ++k) CHECK(o.at(k).phasor() == t.at(k).phasor());
}

TEST_CASE("compiled plan for f(x) = x at eps = 0.2") {
  Fixture fx("x");
  const Hamiltonian h = random_hamiltonian(1, 3);
  const FourierModel m = compiled_cutoff(fx.cache, 1, 0.2);
  CHECK(m.K == 4);
  const CompiledPlan p = make_compiled_plan(m, exact_correction_table(h, m.K), 1, 0.2);
  double gb = 0, psum = 0;
  for (int k = -m.K; k <= m.K; ++k) gb += std::abs(m.coeff(k)) / p.corrections.at(k).A;
  for (double q : p.graveP) psum += q;
  CHECK(p.graveBeta == doctest::Approx(gb));
  CHECK(p.graveBeta == doctest::Approx(1.954610073678487).epsilon(1e-10));
  CHECK(psum == doctest::Approx(1.0));
  CHECK(p.graveN == iteration_count(p.graveBeta, 1, 0.2 / 3));
  CHECK(p.graveN == 574);
  double cost = 0;
  for (int k = -m.K; k <= m.K; ++k) cost += p.probability(k) * 20.0 * k * k;
  CHECK(analytic_cost_compiled(p) == doctest::Approx(cost * p.graveN));
  CHECK(correction_error_budget(fx.cache, m.K, 0.2) ==
        doctest::Approx(std::sqrt(3.0) * 0.2 / (12 * kPi * weighted_abs_sum_with_tail(fx.cache, 4 * m.K))));
  CHECK_THROWS_AS(make_compiled_plan(m, exact_correction_table(h, 2), 1, 0.2), InvalidArgument);
}

TEST_CASE("compiled effective Hamiltonian is the compensated one") {
  Fixture fx("x");
  for (int n = 1; n <= 2; ++n) {
    const Hamiltonian h = random_hamiltonian(n, 3 + n);
    const FourierModel m = select_cutoff(fx.cache, 0.05);
    CorrectionTable table = exact_correction_table(h, m.K);
    table.at(2).A *= 1.03;
    table.at(2).theta += 0.01;
    const CompiledPlan p = make_compiled_plan(m, table, 1, 0.2);
    CHECK(operator_norm(compiled_effective_hamiltonian(p, h) - compensated_hamiltonian(p, h)) < 1e-8);
  }
}

TEST_CASE("a single perturbed correction bounds f_Phi") {
  Fixture fx("x");
  const Hamiltonian h = random_hamiltonian(1, 3);
  const FourierModel m = compiled_cutoff(fx.cache, 1, 0.2);
  CorrectionTable table = exact_correction_table(h, m.K);
  const CompiledPlan exact = make_compiled_plan(m, table, 1, 0.2);
  CHECK(h_phi_diagnostic(exact, h).supFPhi < 1e-12);
  const Complex delta(0.04, -0.02);
  const Complex target = table.at(3).phasor() / (1.0 + delta);
  table.at(3).A = std::abs(target);
  table.at(3).theta = std::arg(target);
  const HPhiDiagnostic d = h_phi_diagnostic(make_compiled_plan(m, table, 1, 0.2), h);
  CHECK(std::abs(d.delta[static_cast<std::size_t>(3 + m.K)] - delta) < 1e-12);
  CHECK(d.bound == doctest::Approx(2 * std::abs(m.coeff(3)) * std::abs(delta)));
  CHECK(d.supFPhi <= d.bound);
  CHECK(d.supFPhi > 0);
}

TEST_CASE("algorithm 4 trajectories") {
  Fixture fx("x");
  const Hamiltonian z(pauli_matrix_1q(3));
  const FourierModel m = compiled_cutoff(fx.cache, 1, 0.2);
  const CompiledPlan p = make_compiled_plan(m, exact_correction_table(z, m.K), 1, 0.2);
  Stream rng(2);
  const State psi = haar_random_state(2, rng);
  const TrajectoryBatch b = run_algorithm4(p, z, psi, 2000, 5);
  for (std::size_t w = 0; w < b.states.size(); ++w) {
    std::uint64_t q = 0;
    for (int k : b.ks[w]) q += 20ULL * static_cast<std::uint64_t>(k * k);
    CHECK(b.queries[w] == q);
    CHECK(b.ks[w].size() == p.graveN);
  }
  CHECK(sample_algorithm4_queries(p, 2000, 5) == b.queries);
  const State target = expm_hermitian(z, 1.0) * psi;
  CHECK(state_error(target, b.states, 5).pointEstimate <= 0.2);
  CHECK(mean_square_error(target, b.states, 5).pointEstimate <= 0.4);
}

TEST_CASE("state preparation parameters") {
  const D2Params p = d2_params(2, 4);
  CHECK(p.steps == iteration_count(1, 4 * kPi, 1 / (4 * std::sqrt(2.0))));
  CHECK(p.gamma == doctest::Approx(4 * kPi / p.steps));
  CHECK(p.M == 100);
  CHECK(d2_params(1, 1).steps == 559);
}

TEST_CASE("sampled state-preparation probabilities converge to the exact ones") {
  const Hamiltonian h = random_hamiltonian(1, 3);
  const D2Params p = d2_params(1, 1);
  const auto exact = d2_probabilities_exact(h, p, {0.0, kPi / 2});
  CHECK(exact[0].first == doctest::Approx(0.7692).epsilon(1e-3));
  Stream rng(3);
  const auto s = d2_probabilities_sampled(h, p, 0.0, 200, rng);
  CHECK(s.first == doctest::Approx(exact[0].first).epsilon(0.02));
  CHECK(s.second == doctest::Approx(exact[0].second).epsilon(0.05));
  for (const auto& [p0, pp] : exact) {
    CHECK(p0 >= 0);
    CHECK(p0 <= 1);
    CHECK(pp >= 0);
    CHECK(pp <= 1);
  }
}

TEST_CASE("estimated corrections") {
  const Hamiltonian h = random_hamiltonian(1, 3);
  CorrectionEstimator est(h);
  double se = 0;
  const CorrectionPair ex = correction_exact(h, 2, compiled_inner_steps(2));
  for (int i = 0; i < 40; ++i) {
    Stream r = Stream::derive(9, static_cast<std::uint64_t>(i));
    const CorrectionPair c = est.estimate(2, 0.1, 1.0, r);
    CHECK(c.A > 0.5);
    CHECK(c.source == CorrectionSource::kEstimated);
    se += std::norm(1.0 - ex.phasor() / c.phasor());
  }
  CHECK(std::sqrt(se / 40) <= 1.3 * 0.1);

  Stream rng(4);
  const CorrectionTable t = estimate_corrections(h, 2, 0.5, 1, rng, CorrectionMode::kRpe);
  CHECK(t.at(0).source == CorrectionSource::kExact);
  CHECK(t.at(-1).A == t.at(1).A);
  CHECK(t.at(-2).theta == doctest::Approx(-t.at(2).theta));
  Stream rng2(4);
  const CorrectionTable again = estimate_corrections(h, 2, 0.5, 1, rng2, CorrectionMode::kRpe);
  for (int k = -2; k <= 2; ++k) CHECK(again.at(k).phasor() == t.at(k).phasor());
}
