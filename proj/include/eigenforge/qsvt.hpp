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

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace eigenforge {

// 2 sin(pi/10): the block-encoding normalization of the QSVT baseline.
double qsvt_normalization();

// Band edges of cos(H^Q).
inline constexpr double kBandLow = 0.5;
double band_high();  // sqrt(3)/2

// f0 = cos(t f(y)), f1 = sin(t f(y)) with y = 12 arccos(x)/pi - 3 on the band
// [1/2, sqrt(3)/2], joined to zero at 0 and 1 by degree-7 Hermite stubs that
// match value and three derivatives, then extended evenly.
struct QsvtFunctionPair {
  TargetFunction f;
  double t = 0;
  double scale = 1;  // global factor applied by scaled(); < 1 only after a rescale
  // Stub coefficients in powers of (x - a): [s][0] on [0, 1/2], [s][1] on [sqrt3/2, 1].
  std::array<std::array<Eigen::Matrix<double, 8, 1>, 2>, 2> stubs{};

  double band(int s, double x) const;
  // Derivatives 0..3 of the band function at x = 1/2 (side 0) or sqrt3/2
  // (side 1), where y = +1 and y = -1 respectively.
  std::array<double, 4> band_jet(int s, int side) const;
  // Derivatives 0..3 of stub `side` at x.
  std::array<double, 4> stub_jet(int s, int side, double x) const;
  double operator()(int s, double x) const;
  // scale * 2 sin(pi/10) * f_s(x).
  double scaled(int s, double x) const { return scale * qsvt_normalization() * (*this)(s, x); }
};

QsvtFunctionPair build_function_pair(const TargetFunction& f, double t);

struct PairCheck {
  double bandUnitarity = 0;   // max |f0^2 + f1^2 - 1| on the band
  double evenness = 0;        // max |f_s(-x) - f_s(x)|
  double junction = 0;        // max jet mismatch at 1/2, sqrt3/2 and the zero jets at 0, 1
  double maxScaled = 0;       // max |scaled(s, x)|
};

PairCheck check_function_pair(const QsvtFunctionPair& pair);

// H^Q = pi (H0 + 3I)/12.
Hamiltonian hq_of(const Hamiltonian& h);

// |s><s| (x) [[cos H^Q, i sin H^Q], [i sin H^Q, cos H^Q]] + |s'><s'| (x) I (x) I.
Operator b_s_operator(const Hamiltonian& h, int s);
// Same unitary assembled from Hadamards and doubly controlled e^{-+i H^Q}.
Operator b_s_operator_factored(const Hamiltonian& h, int s);

// f0(cos H^Q) - i f1(cos H^Q).
Operator qsvt_spectral_operator(const QsvtFunctionPair& pair, const Hamiltonian& h);

struct ChebyshevModel {
  std::array<std::vector<double>, 2> coeffs;  // c_k, k = 0..K_s
  std::array<int, 2> K{};
  std::array<double, 2> gridError{};
  std::array<double, 2> certifiedError{};
  std::array<double, 2> tailPower{};  // (1/2) sum_{K<k<=4K} c_k^2
  double target = 0;
  double scale = 1;

  int total() const { return K[0] + K[1]; }
  // sum_k c_k T_k(x).
  double evaluate(int s, double x) const;
};

// int_{-1}^{1} g(x) cos(k pi x) dx (halved for k = 0) for an even g, with
// quadrature breaks at multiples of 1/6.
double cosine_series_coefficient(const std::function<double(double)>& g, int k);

// Coefficient of g(x) = scaled(s, cos(pi x)).
double chebyshev_coefficient(const QsvtFunctionPair& pair, int s, int k);

ChebyshevModel chebyshev_model(const QsvtFunctionPair& pair, double epsTarget);

struct QsvtApplyResult {
  State output;            // top-left block applied to psi, over sin(pi/10) scale
  double blockNorm = 0;    // norm of output
  double errorBound = 0;   // (cert0 + cert1) / (2 sin(pi/10) scale)
  double unitarityDefect = 0;
};

// Exact polynomial block application in place of the phase sequence and of
// amplitude amplification. The output is divided by sin(pi/10) * scale.
QsvtApplyResult idealized_qsvt_apply(const ChebyshevModel& model, const Hamiltonian& h,
                                     const State& psi);

struct QsvtCostKnobs {
  double c0 = 4;
  double ampFactor = 9;
  double cTime = kPi / 6.0;
  double kdefFraction = 0.125;
};

// KQ * N(1, cTime, eps/(c0 KQ)) * ampFactor.
double cost_model_qsvt(int KQ, double eps, const QsvtCostKnobs& knobs = {});

struct QsvtCost {
  int KQ = 0;
  double queries = 0;
};

// Cutoff at eps * kdefFraction for the pair built from (f, t), then the cost model.
QsvtCost analytic_cost_qsvt(const TargetFunction& f, double t, double eps,
                            const QsvtCostKnobs& knobs = {});

}  // namespace eigenforge
