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

#include "eigenforge/fourier.hpp"

#include <doctest.h>

#include <cmath>

using namespace eigenforge;

namespace {

// f(y) = -sin(pi y / 2), whose extension is exactly cos(pi x).
TargetFunction shifted_cosine() {
  const double a = kPi / 2;
  TargetFunction f;
  f.name = "-sin(pi x/2)";
  f.value = [a](double y) { return -std::sin(a * y); };
  f.derivMinus = {0.0, -a * a, 0.0};
  f.derivPlus = {0.0, a * a, 0.0};
  return f;
}

// Reference coefficients of f(x) = x from an independent solve of the seam
// conditions followed by adaptive quadrature.
const double kXRe[9] = {0.0, -0.569452477915983, 0.0, 0.07242178255942619, 0.0, -0.0027447855039616827,
                        0.0, -0.00017823282493257576, 0.0};
const double kXIm[9] = {0.0, 0.0, -0.2015962612497341, 0.0, 0.02008383805683442, 0.0,
                        0.0005052537875933211, 0.0, 0.00010334736564408809};

}  // namespace

TEST_CASE("target function parsing") {
  CHECK(make_target_function("x")(0.3) == doctest::Approx(0.3));
  CHECK(make_target_function("poly:1,0,2")(0.5) == doctest::Approx(1.5));
  CHECK(make_target_function("const:0.25")(0.9) == doctest::Approx(0.25));
  CHECK_THROWS_AS(make_target_function(""), InvalidArgument);
  CHECK_THROWS_AS(make_target_function("sinh"), InvalidArgument);
  CHECK_THROWS_AS(make_target_function("poly:1,a"), InvalidArgument);
  for (const auto& name : builtin_function_names()) CHECK(check_boundary_derivatives(make_target_function(name)).ok);
}

TEST_CASE("g_f coefficients for a constant") {
  const double c = 0.7;
  const GfCoefficients g = gf_coefficients(make_target_function("const:0.7"));
  CHECK(g.C[0] == doctest::Approx(0.0));
  CHECK(g.C[1] == doctest::Approx(4 * c / 3));
  CHECK(g.C[2] == doctest::Approx(0.0));
  CHECK(g.C[3] == doctest::Approx(-c / 3));
  for (double s : g.S) CHECK(s == doctest::Approx(0.0));
  CHECK(gf_derivative(g, 0.0, 0) == doctest::Approx(c));
  CHECK(gf_derivative(g, -1.0, 0) == doctest::Approx(c));
}

TEST_CASE("g_f coefficients for f(x) = x") {
  const GfCoefficients g = gf_coefficients(make_target_function("x"));
  const double expectC[4] = {-9.0 / 8, 0.0, 1.0 / 8, 0.0};
  const double expectS[4] = {0.0, 8 / (3 * kPi), 0.0, -2 / (3 * kPi)};
  for (int i = 0; i < 4; ++i) {
    CHECK(g.C[static_cast<std::size_t>(i)] == doctest::Approx(expectC[i]).epsilon(1e-14));
    CHECK(g.S[static_cast<std::size_t>(i)] == doctest::Approx(expectS[i]).epsilon(1e-14));
  }
  CHECK(std::abs(gf_derivative(g, -0.5, 0)) < 1e-14);
}

TEST_CASE("extension is smooth to third order at both seams") {
  for (const auto& name : builtin_function_names()) {
    CAPTURE(name);
    const PeriodicExtension ext(make_target_function(name));
    CHECK(seam_report(ext).max() <= 1e-6);
    CHECK(seam_report_finite_difference(ext).max() <= 0.05);
  }
}

TEST_CASE("a perturbed smoothing matrix breaks the seams") {
  SmoothingMatrix phi = smoothing_matrix();
  phi(0, 0) += 1e-3;
  CHECK(seam_report(PeriodicExtension(make_target_function("x"), phi)).max() > 1e-6);
}

TEST_CASE("extension values") {
  const PeriodicExtension ext(make_target_function("x"));
  CHECK(ext(0.25) == doctest::Approx(-0.5));
  CHECK(ext(1.0) == doctest::Approx(1.0));
  CHECK(ext(-1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tilde_f_eval(ext, 0.75) == doctest::Approx(0.5));
}

TEST_CASE("Simpson integration") {
  CHECK(integrate_simpson([](double x) { return std::exp(x); }, 0, 1) == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-12));
}

TEST_CASE("cos(pi x) extension has only the first harmonic") {
  const PeriodicExtension ext(shifted_cosine());
  CHECK(std::abs(fourier_coefficient(ext, 1) - Complex(0.5, 0)) < 1e-10);
  CHECK(std::abs(fourier_coefficient(ext, -1) - Complex(0.5, 0)) < 1e-10);
  for (int k : {0, 2, 3, 4, 5, 9}) CHECK(std::abs(fourier_coefficient(ext, k)) < 1e-10);
}

TEST_CASE("coefficients of f(x) = x match the reference table") {
  const PeriodicExtension ext(make_target_function("x"));
  CoefficientCache cache(ext);
  const auto fft = fourier_coefficients_fft(ext, 8);
  for (int k = 0; k <= 8; ++k) {
    CAPTURE(k);
    const Complex ref(kXRe[k], kXIm[k]);
    CHECK(std::abs(cache(k) - ref) < 1e-10);
    CHECK(std::abs(cache(-k) - std::conj(ref)) < 1e-10);
    CHECK(std::abs(fft[static_cast<std::size_t>(k)] - ref) < 1e-8);
  }
}

TEST_CASE("cutoff selection") {
  const PeriodicExtension ext(make_target_function("x"));
  CoefficientCache cache(ext);
  const FourierModel m = select_cutoff(cache, 1e-3);
  CHECK(m.K == 6);
  CHECK(m.supError < 1e-3);
  CHECK(select_cutoff(cache, 0.025).K == 4);
  CHECK(select_cutoff(cache, 0.025).beta == doctest::Approx(1.7271087195639558).epsilon(1e-10));
  CHECK(select_cutoff(cache, 0.05).K == 3);
  // Minimality: one fewer mode misses the target.
  const FourierModel smaller = build_model({cache(0), cache(1), cache(2), cache(3), cache(4), cache(5)}, 5);
  CHECK(model_sup_error(ext, smaller) >= 1e-3);
  CHECK(m.evaluate(0.3) == doctest::Approx(ext(0.3)).epsilon(1e-3));
  // A constant still gets a non-trivial g_f, so K grows as the target shrinks.
  const PeriodicExtension flat(make_target_function("const:2"));
  int previous = 0;
  for (double target : {1e-2, 1e-5, 1e-8}) {
    const FourierModel fm = select_cutoff(flat, target);
    CHECK(fm.K >= previous);
    CHECK(model_sup_error(flat, fm) < target);
    previous = fm.K;
  }
  CHECK_THROWS_AS(select_cutoff(cache, 0.0), InvalidArgument);
}

TEST_CASE("cutoff grows like target^(-1/4)") {
  const PeriodicExtension ext(make_target_function("x"));
  CoefficientCache cache(ext);
  const double k2 = select_cutoff(cache, 1e-2).K, k5 = select_cutoff(cache, 1e-5).K;
  const double slope = std::log(k5 / k2) / std::log(1e-3);
  CHECK(slope < -0.15);
  CHECK(slope > -0.35);
}

TEST_CASE("model bookkeeping") {
  const PeriodicExtension ext(make_target_function("x"));
  CoefficientCache cache(ext);
  const FourierModel m = select_cutoff(cache, 1e-3);
  double beta = 0, psum = 0;
  for (int k = -m.K; k <= m.K; ++k) {
    beta += std::abs(m.coeff(k));
    psum += m.probability(k);
    CHECK(std::abs(std::polar(std::abs(m.coeff(k)), m.phase(k)) - m.coeff(k)) < 1e-14);
  }
  CHECK(m.beta == doctest::Approx(beta));
  CHECK(psum == doctest::Approx(1.0));
}

TEST_CASE("decay proxy and tail condition") {
  for (const auto& name : builtin_function_names()) {
    CAPTURE(name);
    const PeriodicExtension ext(make_target_function(name));
    CoefficientCache cache(ext);
    for (double target : {1e-2, 1e-3, 1e-4}) {
      const FourierModel m = select_cutoff(cache, target);
      const DecayReport r = decay_diagnostics(cache, m);
      CHECK(r.decayHigh <= 3 * r.decayLow + 1e-12);
      CHECK(r.tailPower <= target * target * 1.01);
      CHECK(r.C3 == doctest::Approx(r.beta * r.beta * r.beta * r.sumAbsK2));
    }
  }
}

TEST_CASE("weighted sum with tail bounds the truncated sum") {
  const PeriodicExtension ext(make_target_function("x^2"));
  CoefficientCache cache(ext);
  double exact = 0;
  for (int k = 1; k <= 400; ++k) exact += 2 * std::abs(cache(k)) * k;
  const double est = weighted_abs_sum_with_tail(cache, 40);
  CHECK(est >= exact - 1e-9);
  CHECK(est <= exact * 1.05);
}
