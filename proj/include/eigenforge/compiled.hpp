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

#include "eigenforge/controlization.hpp"
#include "eigenforge/core.hpp"
#include "eigenforge/fourier.hpp"
#include "eigenforge/rng.hpp"
#include "eigenforge/uncompiled.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace eigenforge {

enum class CorrectionSource { kExact, kEstimated };

struct CorrectionPair {
  int k = 0;
  double A = 1;
  double theta = 0;  // (-pi, pi]
  CorrectionSource source = CorrectionSource::kExact;

  Complex phasor() const { return std::polar(A, theta); }
};

struct CorrectionTable {
  int K = 0;
  std::vector<CorrectionPair> entries;  // k = -K..K at index k + K

  const CorrectionPair& at(int k) const;
  CorrectionPair& at(int k);
};

// Inner-layer length used by the compiled algorithm for frequency k.
inline std::uint64_t compiled_inner_steps(int k) {
  return 10ULL * static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(k);
}

// prod_l ctrl(sigma_l) (I (x) exp(-ik pi H/(2M))) ctrl(sigma_l) (e^{-ik pi Z/4} (x) I)
// with M = words.size(); words[0] acts first.
Operator w_operator(const Hamiltonian& h, int k, const std::vector<PauliWord>& words);

// A e^{i theta} = [tr exp(-i pi k H0/(2M)) / 2^n]^M.
CorrectionPair correction_exact(const Hamiltonian& h, int k, std::uint64_t M);

// Average over all words of W^dag (G (x) I) W, G a 2x2 operator on the control.
// Exact superoperator power; n <= 3.
Operator averaged_w_sandwich(const Hamiltonian& h, int k, std::uint64_t M, const Operator& G);

// Right-hand side A (e^{i theta Z/2} (x) I) [[0, e^{i phi} E_k], [h.c., 0]] (e^{-i theta Z/2} (x) I),
// E_k = exp(ik pi (H0 + I)/2).
Operator lemma_d1_rhs(const Hamiltonian& h, const CorrectionPair& c, double phi);

// Operator-norm deviation between the enumerated word average and the
// right-hand side. Requires 4^{nM} <= 2^20.
double verify_lemma_d1(const Hamiltonian& h, int k, std::uint64_t M, double phi);

CorrectionTable exact_correction_table(const Hamiltonian& h, int K);

// Cutoff for target eps/(6t).
FourierModel compiled_cutoff(CoefficientCache& cache, double t, double eps);

// sqrt(3) eps / (12 pi S), S = sum_k |c_k||k| truncated at 4K plus tail.
double correction_error_budget(CoefficientCache& cache, int K, double eps);

// Parameters of the state preparation used for correction estimation.
struct D2Params {
  int l = 1;
  std::uint64_t depth = 1;   // RPE depth k
  std::uint64_t steps = 0;   // N' = N(1, k pi, 1/(4 sqrt 2))
  double gamma = 0;          // k pi / N'
  std::uint64_t M = 0;       // 25 k
};

D2Params d2_params(int l, std::uint64_t depth);

// Success probabilities (p0, p+) of |0> and |+> on the control after the
// full state preparation, averaged over all randomness, for each Phi. n = 1.
std::vector<std::pair<double, double>> d2_probabilities_exact(const Hamiltonian& h,
                                                              const D2Params& p,
                                                              const std::vector<double>& Phis);

// Same quantity averaged over `shots` sampled state preparations (any n).
std::pair<double, double> d2_probabilities_sampled(const Hamiltonian& h, const D2Params& p,
                                                   double Phi, std::uint64_t shots, Stream& rng);

enum class CorrectionMode { kOracle, kRpe };

struct EstimationOptions {
  double deltaSup = 0.2;
  int retryLimit = 16;
  std::uint64_t sampledShots = 64;  // n >= 2 only
  std::uint64_t sampleSeed = 0;     // stream for sampled probabilities
};

// Estimates (A^_l, theta^_l) by robust phase estimation on the prepared
// states. Probabilities are cached per (l, depth), so repeated estimates
// only redraw the measurement outcomes.
class CorrectionEstimator {
 public:
  CorrectionEstimator(const Hamiltonian& h, EstimationOptions options = {});

  // RMS phasor error target eps/t.
  CorrectionPair estimate(int l, double eps, double t, Stream& rng);
  std::pair<double, double> probabilities(int l, std::uint64_t depth, int family);
  int attempts() const { return attempts_; }

 private:
  const Hamiltonian* h_;
  EstimationOptions options_;
  std::map<std::pair<int, std::uint64_t>, std::vector<std::pair<double, double>>> cache_;
  int attempts_ = 0;
};

// Entries for k = 1..K; negative k by mirror symmetry, k = 0 is (1, 0).
CorrectionTable estimate_corrections(const Hamiltonian& h, int K, double eps, double t,
                                     Stream& rng, CorrectionMode mode,
                                     const EstimationOptions& options = {});

struct CompiledPlan {
  FourierModel model;
  CorrectionTable corrections;
  double t = 0;
  double eps = 0;
  double graveBeta = 0;
  std::uint64_t graveN = 0;
  std::vector<double> graveP;  // index k + K

  int K() const { return model.K; }
  double probability(int k) const { return graveP[static_cast<std::size_t>(k + model.K)]; }
};

CompiledPlan make_compiled_plan(const FourierModel& model, const CorrectionTable& corrections,
                                double t, double eps);

// Compiled trajectories from |+> (x) psi; queries per step are 20 k^2.
TrajectoryBatch run_algorithm4(const CompiledPlan& plan, const Hamiltonian& h,
                               const State& psi, std::uint64_t trajectories,
                               std::uint64_t seed);

// Query counts of run_algorithm4 without simulating any unitary.
std::vector<std::uint64_t> sample_algorithm4_queries(const CompiledPlan& plan,
                                                     std::uint64_t trajectories,
                                                     std::uint64_t seed);

// graveN sum_k graveP_k 20 k^2.
double analytic_cost_compiled(const CompiledPlan& plan);

struct HPhiDiagnostic {
  std::vector<Complex> delta;  // index k + K
  double supFPhi = 0;
  double bound = 0;            // 2 sum |c_k||Delta_k|
};

HPhiDiagnostic h_phi_diagnostic(const CompiledPlan& plan, const Hamiltonian& h);

// sum_k (|c_k|/A^_k) e^{-i theta^ Z/2} avg(W^dag G_k W) e^{i theta^ Z/2}.
Operator compiled_effective_hamiltonian(const CompiledPlan& plan, const Hamiltonian& h);

// X (x) [f_K + f_Phi]((H0 + I)/2).
Operator compensated_hamiltonian(const CompiledPlan& plan, const Hamiltonian& h);

}  // namespace eigenforge
