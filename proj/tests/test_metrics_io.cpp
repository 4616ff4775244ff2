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

#include "eigenforge/io.hpp"
#include "eigenforge/metrics.hpp"
#include "eigenforge/superop.hpp"

#include <doctest.h>

#include <cmath>

using namespace eigenforge;

TEST_CASE("state error of a 50/50 mixture against |0>") {
  std::vector<State> states;
  for (int i = 0; i < 1000; ++i) states.push_back(basis_state(2, i % 2));
  const ErrorEstimate e = state_error(basis_state(2, 0), states, 3);
  CHECK(e.pointEstimate == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.lo <= e.pointEstimate);
  CHECK(e.hi >= e.pointEstimate);
  CHECK(e.sampleCount == 1000);
  CHECK(mean_square_error(basis_state(2, 0), states, 3).pointEstimate == doctest::Approx(2.0));
}

TEST_CASE("error estimates on controlled states trace out the control") {
  Stream rng(4);
  const State psi = haar_random_state(2, rng);
  State full = State::Zero(4);
  full.head(2) = psi / std::sqrt(2.0);
  full.tail(2) = psi / std::sqrt(2.0);
  const std::vector<State> states(100, full);
  const ErrorEstimate e = state_error(psi, states, 1);
  CHECK(e.pointEstimate < 1e-12);
  CHECK_THROWS_AS(state_error(psi, std::vector<State>(99, full), 1), InvalidArgument);
  CHECK_THROWS_AS(state_error(psi, std::vector<State>(100, State::Zero(3)), 1), InvalidArgument);
}

TEST_CASE("mean square error dominates the squared state error") {
  Stream rng(6);
  const State target = haar_random_state(2, rng);
  std::vector<State> states;
  for (int i = 0; i < 400; ++i) {
    State s = target + 0.3 * haar_random_state(2, rng);
    states.push_back(s / s.norm());
  }
  const ErrorEstimate se = state_error(target, states, 2);
  const ErrorEstimate ms = mean_square_error(target, states, 2);
  CHECK(ms.pointEstimate >= se.pointEstimate * se.pointEstimate - 3 * ms.standardError);
  CHECK(ms.standardError > 0);
  const ErrorEstimate again = state_error(target, states, 2);
  CHECK(again.lo == se.lo);
  CHECK(again.hi == se.hi);
}

TEST_CASE("Choi distance against a depolarized unitary") {
  const Hamiltonian h = random_hamiltonian(1, 2);
  const Operator u = unitary_superop(expm_hermitian(h, 0.4));
  const double p = 0.1;
  // Full depolarizing: rho -> tr(rho) I / 2, i.e. vec(I) vec(I)^T / 2.
  Operator dep = Operator::Zero(4, 4);
  dep(0, 0) = dep(0, 3) = dep(3, 0) = dep(3, 3) = 0.5;
  const Operator noisy = (1 - p) * u + p * dep * u;
  CHECK(choi_error(u, noisy) == doctest::Approx(2 * p * (1 - 0.25)).epsilon(1e-10));
  CHECK(choi_error(u, u) < 1e-12);
}

TEST_CASE("power-law fits") {
  std::vector<std::pair<double, double>> pts;
  for (double eps : {0.3, 0.1, 0.03, 0.01}) pts.emplace_back(eps, 5.0 * std::pow(eps, -2.0));
  const ScalingFit f = fit_scaling(pts, 1);
  CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.accepted());
  CHECK(f.spanDecades == doctest::Approx(std::log10(30.0)));
  CHECK_FALSE(f.spanOk);
  CHECK(f.slopeLo <= f.slope);
  CHECK(f.slopeHi >= f.slope);
  pts.emplace_back(0.001, 5e6);
  CHECK(fit_scaling(pts).spanOk);
  CHECK_THROWS_AS(fit_scaling({{0.1, 1}, {0.2, 2}, {0.3, 3}}), InvalidArgument);
  CHECK_THROWS_AS(fit_scaling({{0.1, 1}, {0.2, 2}, {0.3, 3}, {0.4, -1}}), InvalidArgument);
  CHECK_THROWS_AS(fit_scaling({{0.1, 1}, {0.1, 2}, {0.1, 3}, {0.1, 4}}), InvalidArgument);
  std::vector<std::pair<double, double>> noisy = {{0.3, 10}, {0.1, 1}, {0.03, 50}, {0.01, 2}};
  CHECK_FALSE(fit_scaling(noisy).accepted());
}

TEST_CASE("json round trips") {
  Stream rng(3);
  const State s = haar_random_state(4, rng);
  CHECK(state_from_json(Json::parse(to_json(s).dump())) == s);
  const Operator m = random_hamiltonian(2, 2).matrix();
  CHECK(operator_from_json(Json::parse(to_json(m).dump())) == m);

  PeriodicExtension ext(make_target_function("x"));
  CoefficientCache cache(ext);
  const FourierModel fm = select_cutoff(cache, 1e-2);
  const FourierModel back = fourier_model_from_json(Json::parse(to_json(fm).dump()));
  CHECK(back.K == fm.K);
  CHECK(back.beta == fm.beta);
  CHECK(back.coeffs == fm.coeffs);

  const CorrectionTable t = exact_correction_table(random_hamiltonian(1, 1), 3);
  const CorrectionTable tb = correction_table_from_json(Json::parse(to_json(t).dump()));
  for (int k = -3; k <= 3; ++k) CHECK(tb.at(k).phasor() == t.at(k).phasor());

  const ChebyshevModel cm = chebyshev_model(build_function_pair(make_target_function("x"), 1), 0.05);
  const ChebyshevModel cb = chebyshev_model_from_json(Json::parse(to_json(cm).dump()));
  CHECK(cb.K == cm.K);
  CHECK(cb.coeffs == cm.coeffs);
  CHECK(cb.evaluate(0, 0.6) == cm.evaluate(0, 0.6));
}

TEST_CASE("malformed json is rejected") {
  CHECK_THROWS_AS(state_from_json(Json::parse("[[1]]")), InvalidArgument);
  CHECK_THROWS_AS(state_from_json(Json::parse("{\"a\": 1}")), InvalidArgument);
  CHECK_THROWS_AS(operator_from_json(Json::parse("[[[1,0]],[[1,0],[0,0]]]")), InvalidArgument);
  Json t = to_json(exact_correction_table(random_hamiltonian(1, 1), 2));
  std::swap(t["entries"][0], t["entries"][1]);
  CHECK_THROWS_AS(correction_table_from_json(t), InvalidArgument);
  Json u = to_json(exact_correction_table(random_hamiltonian(1, 1), 2));
  u["entries"][1]["source"] = "guess";
  CHECK_THROWS_AS(correction_table_from_json(u), InvalidArgument);
  CHECK_THROWS_AS(fourier_model_from_json(Json::parse("{\"K\": 2, \"coeffs\": []}")), InvalidArgument);
}

TEST_CASE("hashing") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
  CHECK(hamiltonian_hash(random_hamiltonian(2, 7)) == hamiltonian_hash(random_hamiltonian(2, 7)));
  CHECK(hamiltonian_hash(random_hamiltonian(2, 7)) != hamiltonian_hash(random_hamiltonian(2, 8)));
}
