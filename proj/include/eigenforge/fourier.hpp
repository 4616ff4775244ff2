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

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace eigenforge {

// f on [-1, 1] together with f', f'', f''' at both endpoints.
struct TargetFunction {
  std::string name;
  std::function<double(double)> value;
  std::array<double, 3> derivMinus{};  // f^(1..3)(-1)
  std::array<double, 3> derivPlus{};   // f^(1..3)(+1)

  double operator()(double x) const { return value(x); }
};

// Built-ins: "x", "x^2", "x^3", "cos(pi x/2)", "zero", "const:<c>",
// "poly:<a0>,<a1>,..." (coefficients in increasing degree).
TargetFunction make_target_function(const std::string& spec);
std::vector<std::string> builtin_function_names();

struct BoundaryCheck {
  double maxRelativeDeviation = 0;
  bool ok = false;
};

// Compares the supplied boundary derivatives with central differences of
// the evaluator (which is sampled slightly outside [-1, 1]).
BoundaryCheck check_boundary_derivatives(const TargetFunction& f, double relTol = 1e-4);

using SmoothingMatrix = Eigen::Matrix4d;

SmoothingMatrix smoothing_matrix();

struct GfCoefficients {
  std::array<double, 4> C{};
  std::array<double, 4> S{};
};

GfCoefficients gf_coefficients(const TargetFunction& f,
                               const SmoothingMatrix& phi = smoothing_matrix());

// j-th derivative (j = 0..4) of the trigonometric polynomial g_f.
double gf_derivative(const GfCoefficients& g, double x, int order);

class PeriodicExtension {
 public:
  PeriodicExtension() = default;
  explicit PeriodicExtension(TargetFunction f,
                             const SmoothingMatrix& phi = smoothing_matrix());

  const TargetFunction& base() const { return base_; }
  const GfCoefficients& gf() const { return gf_; }

  // g_f(x) on [-1, 0), f(2x - 1) on [0, 1].
  double operator()(double x) const;
  double left_branch(double x) const { return gf_derivative(gf_, x, 0); }
  double right_branch(double x) const { return base_.value(2.0 * x - 1.0); }

 private:
  TargetFunction base_;
  GfCoefficients gf_;
};

double tilde_f_eval(const PeriodicExtension& ext, double x);

struct SeamReport {
  // |left^(j) - right^(j)| for j = 0..3 at x = 0 and at the +-1 wrap.
  std::array<double, 4> atZero{};
  std::array<double, 4> atWrap{};
  double max() const;
};

// Exact derivatives of g_f against the scaled boundary data 2^j f^(j)(-+1).
SeamReport seam_report(const PeriodicExtension& ext);

// Same quantities by 5-point central differences of the two branches.
SeamReport seam_report_finite_difference(const PeriodicExtension& ext, double h = 1e-3);

// Composite Simpson, doubling the panel count from `initialPanels` until two
// successive levels agree to `tol`.
double integrate_simpson(const std::function<double(double)>& fn, double a, double b,
                         double tol = 1e-10, std::int64_t initialPanels = 64);

// (1/2) int_{-1}^{1} exp(-i k pi x) ftilde(x) dx.
Complex fourier_coefficient(const PeriodicExtension& ext, int k);

// Coefficients c_0..c_kmax by a 2^logSize periodic DFT (cross-check path).
std::vector<Complex> fourier_coefficients_fft(const PeriodicExtension& ext, int kmax,
                                              int logSize = 16);

// Lazily extended table of c_k, k >= 0. c_{-k} = conj(c_k).
class CoefficientCache {
 public:
  explicit CoefficientCache(const PeriodicExtension& ext) : ext_(&ext) {}
  Complex operator()(int k);
  const PeriodicExtension& extension() const { return *ext_; }

 private:
  const PeriodicExtension* ext_;
  std::vector<Complex> values_;
};

struct FourierModel {
  int K = 0;
  std::vector<Complex> coeffs;  // c_k at index k + K
  double beta = 0;
  std::vector<double> phases;  // phi_k at index k + K
  double supError = 0;

  Complex coeff(int k) const { return coeffs[static_cast<std::size_t>(k + K)]; }
  double phase(int k) const { return phases[static_cast<std::size_t>(k + K)]; }
  double probability(int k) const { return beta > 0 ? std::abs(coeff(k)) / beta : 0.0; }
  // sum_{|k| <= K} c_k exp(i k pi x), real part.
  double evaluate(double x) const;
};

FourierModel build_model(const std::vector<Complex>& nonNegative, int K);

std::vector<double> verification_grid(int K);

// Smallest K (doubling, then bisection) with grid sup error below target.
FourierModel select_cutoff(const PeriodicExtension& ext, double supTarget);
FourierModel select_cutoff(CoefficientCache& cache, double supTarget);

double model_sup_error(const PeriodicExtension& ext, const FourierModel& model);

inline constexpr double kCoefficientFloor = 1e-13;

struct DecayReport {
  double beta = 0;
  double maxDecay = 0;          // max_{1<=|k|<=4K} |c_k| k^4
  double decayLow = 0;          // max_{10<=k<=50} |c_k| k^4
  double decayHigh = 0;         // max_{50<=k<=200} |c_k| k^4
  double tailPower = 0;         // sum_{K<|k|<=4K} |c_k|^2
  double sumAbsK = 0;           // sum_{|k|<=K} |c_k||k|
  double sumAbsK2 = 0;          // sum_{|k|<=K} |c_k| k^2
  double C3 = 0;                // beta^3 * sumAbsK2
  double C4 = 0;                // beta * sumAbsK2
};

DecayReport decay_diagnostics(CoefficientCache& cache, const FourierModel& model,
                              bool includeProxyRange = true);

// sum_{|k|<=L} |c_k||k| plus a |c_k| <= B/k^4 tail estimate beyond L, with B
// the largest |c_k| k^4 seen on (L/4, L].
double weighted_abs_sum_with_tail(CoefficientCache& cache, int L);

}  // namespace eigenforge
