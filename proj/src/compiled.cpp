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

#include "eigenforge/qdrift.hpp"
#include "eigenforge/rpe.hpp"
#include "eigenforge/superop.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

namespace eigenforge {

namespace {

Operator block_diag(const Operator& a, const Operator& b) {
  Operator out = Operator::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Operator control_op(const Operator& u2, Index d) { return kron(u2, identity(d)); }

// [[0, e^{i phi}], [e^{-i phi}, 0]] = cos(phi) X - sin(phi) Y.
Operator xy_generator(double phi) {
  Operator g = Operator::Zero(2, 2);
  g(0, 1) = std::polar(1.0, phi);
  g(1, 0) = std::polar(1.0, -phi);
  return g;
}

// exp(ik pi (H0 + I)/2).
Operator frequency_operator(const Hamiltonian& h, int k) {
  return h.traceless_function([k](double x) { return std::polar(1.0, k * kPi * (x + 1.0) / 2.0); });
}

void require_psi(const Hamiltonian& h, const State& psi) {
  if (psi.size() != h.dim()) throw InvalidArgument("input state dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw InvalidArgument("input state is not normalized");
}

// Matrix of T -> avg_v A_v T A_v^dag on vectorized superoperators, with
// A_v = Ad(diag(E, sigma_v E sigma_v)).
Operator sandwich_map(const ConjugatedPropagator& prop) {
  const Index D = 2 * prop.plain().rows();
  const Index D4 = D * D * D * D;
  Operator L = Operator::Zero(D4, D4);
  for (std::uint64_t v = 0; v < prop.word_count(); ++v) {
    const Operator a = unitary_superop(block_diag(prop.plain(), prop.conjugated(v)));
    L += kron(a, a.conjugate().eval());
  }
  return L / static_cast<double>(prop.word_count());
}

State apply_power(const Operator& L, std::uint64_t count, State v) {
  if (count <= 4096) {
    State tmp(v.size());
    for (std::uint64_t i = 0; i < count; ++i) {
      tmp.noalias() = L * v;
      v.swap(tmp);
    }
    return v;
  }
  return superop_power(L, count) * v;
}

}  // namespace

const CorrectionPair& CorrectionTable::at(int k) const {
  if (std::abs(k) > K) throw InvalidArgument("CorrectionTable: k out of range");
  return entries[static_cast<std::size_t>(k + K)];
}

CorrectionPair& CorrectionTable::at(int k) {
  if (std::abs(k) > K) throw InvalidArgument("CorrectionTable: k out of range");
  return entries[static_cast<std::size_t>(k + K)];
}

Operator w_operator(const Hamiltonian& h, int k, const std::vector<PauliWord>& words) {
  const Index d = h.dim();
  Operator w = control_op(z_rotation(k * kPi / 4.0), d);
  if (words.empty() || k == 0) return w;
  const double tau = k * kPi / (2.0 * static_cast<double>(words.size()));
  for (const auto& word : words) w = controlized_step(h, word, tau) * w;
  return w;
}

CorrectionPair correction_exact(const Hamiltonian& h, int k, std::uint64_t M) {
  CorrectionPair c;
  c.k = k;
  if (k == 0) return c;
  if (M == 0) throw InvalidArgument("correction_exact: M must be positive for k != 0");
  const RealVector e = h.traceless_eigenvalues();
  Complex z = 0;
  const double a = kPi * k / (2.0 * static_cast<double>(M));
  for (Index m = 0; m < e.size(); ++m) z += std::polar(1.0, -a * e(m));
  z /= static_cast<double>(e.size());
  if (std::abs(z) == 0.0) throw NumericalError("correction_exact: degenerate trace (A = 0)");
  c.A = std::pow(std::abs(z), static_cast<double>(M));
  c.theta = wrap_angle(std::fmod(static_cast<double>(M) * std::arg(z), 2.0 * kPi));
  return c;
}

Operator averaged_w_sandwich(const Hamiltonian& h, int k, std::uint64_t M, const Operator& G) {
  if (h.n() > 3) throw InvalidArgument("averaged_w_sandwich: n must be at most 3");
  if (G.rows() != 2 || G.cols() != 2) throw InvalidArgument("averaged_w_sandwich: G must be 2x2");
  const Index d = h.dim();
  const Operator p = control_op(z_rotation(k * kPi / 4.0), d);
  Operator x = control_op(G, d);
  if (k != 0 && M > 0) {
    // vec(C^dag X C) = (C^dag (x) C^T) vec(X).
    const ConjugatedPropagator prop(h, k * kPi / (2.0 * static_cast<double>(M)));
    const Index D = 2 * d;
    Operator s = Operator::Zero(D * D, D * D);
    for (std::uint64_t v = 0; v < prop.word_count(); ++v) {
      const Operator c = block_diag(prop.plain(), prop.conjugated(v));
      s += kron(c.adjoint().eval(), c.transpose().eval());
    }
    s /= static_cast<double>(prop.word_count());
    x = unvec((superop_power(s, M) * vec(x)).eval());
  }
  return p.adjoint() * x * p;
}

Operator lemma_d1_rhs(const Hamiltonian& h, const CorrectionPair& c, double phi) {
  const Index d = h.dim();
  Operator mid = Operator::Zero(2 * d, 2 * d);
  const Operator e = std::polar(1.0, phi) * frequency_operator(h, c.k);
  mid.topRightCorner(d, d) = e;
  mid.bottomLeftCorner(d, d) = e.adjoint();
  const Operator z = control_op(z_rotation(-c.theta / 2.0), d);  // e^{i theta Z/2}
  return c.A * z * mid * z.adjoint();
}

double verify_lemma_d1(const Hamiltonian& h, int k, std::uint64_t M, double phi) {
  if (k != 0 && M == 0) throw InvalidArgument("verify_lemma_d1: M must be positive");
  const int n = h.n();
  if (static_cast<std::uint64_t>(n) * M > 10) throw InvalidArgument("verify_lemma_d1: instance too large");
  const Index d = h.dim();
  const Operator g = control_op(xy_generator(phi), d);
  const Operator p = control_op(z_rotation(k * kPi / 4.0), d);
  Operator lhs = Operator::Zero(2 * d, 2 * d);
  std::uint64_t leaves = 0;
  if (k == 0 || M == 0) {
    lhs = p.adjoint() * g * p;
    leaves = 1;
  } else {
    const ConjugatedPropagator prop(h, k * kPi / (2.0 * static_cast<double>(M)));
    std::vector<Operator> steps;
    for (std::uint64_t v = 0; v < prop.word_count(); ++v)
      steps.push_back(block_diag(prop.plain(), prop.conjugated(v)));
    // Depth-first over word sequences, sharing prefix products.
    std::function<void(std::uint64_t, const Operator&)> walk = [&](std::uint64_t level,
                                                                 const Operator& prefix) {
      if (level == M) {
        const Operator w = prefix * p;
        lhs += w.adjoint() * g * w;
        ++leaves;
        return;
      }
      for (const auto& s : steps) walk(level + 1, (s * prefix).eval());
    };
    walk(0, Operator::Identity(2 * d, 2 * d));
  }
  lhs /= static_cast<double>(leaves);
  const Operator rhs = lemma_d1_rhs(h, correction_exact(h, k, M), phi);
  return operator_norm(lhs - rhs);
}

CorrectionTable exact_correction_table(const Hamiltonian& h, int K) {
  if (K < 0) throw InvalidArgument("exact_correction_table: K must be non-negative");
  CorrectionTable table;
  table.K = K;
  for (int k = -K; k <= K; ++k) table.entries.push_back(correction_exact(h, k, compiled_inner_steps(k)));
  return table;
}

FourierModel compiled_cutoff(CoefficientCache& cache, double t, double eps) {
  if (!(t > 0) || !(eps > 0)) throw InvalidArgument("compiled_cutoff: t and eps must be positive");
  return select_cutoff(cache, eps / (6.0 * t));
}

double correction_error_budget(CoefficientCache& cache, int K, double eps) {
  if (!(eps > 0)) throw InvalidArgument("correction_error_budget: eps must be positive");
  const double s = weighted_abs_sum_with_tail(cache, std::max(1, 4 * K));
  if (!(s > 0)) return eps;
  return std::sqrt(3.0) * eps / (12.0 * kPi * s);
}

D2Params d2_params(int l, std::uint64_t depth) {
  if (l <= 0 || depth == 0) throw InvalidArgument("d2_params: l and depth must be positive");
  D2Params p;
  p.l = l;
  p.depth = depth;
  const double time = static_cast<double>(depth) * kPi;
  p.steps = iteration_count(1.0, time, 1.0 / (4.0 * std::sqrt(2.0)));
  p.gamma = time / static_cast<double>(p.steps);
  p.M = 25 * depth;
  return p;
}

std::vector<std::pair<double, double>> d2_probabilities_exact(const Hamiltonian& h,
                                                              const D2Params& p,
                                                              const std::vector<double>& Phis) {
  if (h.n() != 1) throw InvalidArgument("d2_probabilities_exact: only n = 1 is supported");
  const Index d = h.dim();
  const Index D = 2 * d;
  const auto l = static_cast<std::uint64_t>(p.l);
  Operator ry(2, 2);
  ry << std::cos(p.gamma), -std::sin(p.gamma), std::sin(p.gamma), std::cos(p.gamma);
  const Operator r = unitary_superop(control_op(ry, d));

  // Inner part E[W_w W_u R W_u^dag W_w^dag] for each sign s, as a superoperator.
  std::vector<Operator> inner;
  for (int s : {1, -1}) {
    State t = vec(r);
    const ConjugatedPropagator pu(h, s * kPi / (20.0 * p.l));
    t = apply_power(sandwich_map(pu), 10 * l * l, t);
    const ConjugatedPropagator pw(h, -s * kPi / (2.0 * p.l * static_cast<double>(p.M)));
    t = apply_power(sandwich_map(pw), l * l * p.M, t);
    inner.push_back(unvec(t));
  }

  std::vector<std::pair<double, double>> out;
  State rho0 = State::Zero(D * D);
  rho0(0) = 1.0;
  for (double phi : Phis) {
    Operator lambda = Operator::Zero(D * D, D * D);
    int idx = 0;
    for (int s : {1, -1}) {
      const Operator z = unitary_superop(control_op(z_rotation(s * phi / 2.0), d));
      lambda += 0.5 * z * inner[static_cast<std::size_t>(idx++)] * z.adjoint();
    }
    const Operator rho = unvec((superop_power(lambda, p.steps) * rho0).eval());
    const double p0 = rho.topLeftCorner(d, d).trace().real();
    const double pp = 0.5 + rho.topRightCorner(d, d).trace().real();
    out.emplace_back(std::clamp(p0, 0.0, 1.0), std::clamp(pp, 0.0, 1.0));
  }
  return out;
}

std::pair<double, double> d2_probabilities_sampled(const Hamiltonian& h, const D2Params& p,
                                                   double Phi, std::uint64_t shots, Stream& rng) {
  if (shots == 0) throw InvalidArgument("d2_probabilities_sampled: shots must be positive");
  const Index d = h.dim();
  const int n = h.n();
  const auto l = static_cast<std::uint64_t>(p.l);
  const std::uint64_t nu = 10 * l * l;
  const std::uint64_t nw = l * l * p.M;
  Operator ry(2, 2);
  ry << std::cos(p.gamma), -std::sin(p.gamma), std::sin(p.gamma), std::cos(p.gamma);

  struct Sign {
    std::unique_ptr<ConjugatedPropagator> u, uInv, w, wInv;
    Operator topFwd, topInv, zFwd, zInv;
  };
  Sign signs[2];
  for (int i = 0; i < 2; ++i) {
    const int s = i == 0 ? 1 : -1;
    const double tu = s * kPi / (20.0 * p.l);
    const double tw = -s * kPi / (2.0 * p.l * static_cast<double>(p.M));
    auto& g = signs[i];
    g.u = std::make_unique<ConjugatedPropagator>(h, tu);
    g.uInv = std::make_unique<ConjugatedPropagator>(h, -tu);
    g.w = std::make_unique<ConjugatedPropagator>(h, tw);
    g.wInv = std::make_unique<ConjugatedPropagator>(h, -tw);
    g.topFwd = expm_hermitian(h, tw * static_cast<double>(nw)) * expm_hermitian(h, tu * static_cast<double>(nu));
    g.topInv = g.topFwd.adjoint();
    g.zFwd = z_rotation(s * Phi / 2.0);
    g.zInv = g.zFwd.adjoint();
  }
  auto apply_control = [d](State& st, const Operator& u2) {
    State a = u2(0, 0) * st.head(d) + u2(0, 1) * st.tail(d);
    State b = u2(1, 0) * st.head(d) + u2(1, 1) * st.tail(d);
    st.head(d) = a;
    st.tail(d) = b;
  };
  double p0 = 0, pp = 0;
  std::vector<std::uint64_t> uw(nu), ww(nw);
  State tmp(d);
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    State st = State::Zero(2 * d);
    st(0) = 1.0;
    for (std::uint64_t m = 0; m < p.steps; ++m) {
      const auto& g = signs[rng.bernoulli(0.5) ? 0 : 1];
      for (auto& v : uw) v = sample_word_index(n, rng);
      for (auto& v : ww) v = sample_word_index(n, rng);
      State b = st.tail(d);
      // W^dag: Z^dag, then the w block reversed, then the u block reversed.
      apply_control(st, g.zInv);
      b = st.tail(d);
      for (std::uint64_t i = nw; i-- > 0;) { tmp.noalias() = g.wInv->conjugated(ww[i]) * b; b.swap(tmp); }
      for (std::uint64_t i = nu; i-- > 0;) { tmp.noalias() = g.uInv->conjugated(uw[i]) * b; b.swap(tmp); }
      st.head(d) = g.topInv * st.head(d);
      st.tail(d) = b;
      apply_control(st, ry);
      b = st.tail(d);
      for (std::uint64_t i = 0; i < nu; ++i) { tmp.noalias() = g.u->conjugated(uw[i]) * b; b.swap(tmp); }
      for (std::uint64_t i = 0; i < nw; ++i) { tmp.noalias() = g.w->conjugated(ww[i]) * b; b.swap(tmp); }
      st.head(d) = g.topFwd * st.head(d);
      st.tail(d) = b;
      apply_control(st, g.zFwd);
    }
    p0 += st.head(d).squaredNorm();
    pp += 0.5 * (st.head(d) + st.tail(d)).squaredNorm();
  }
  return {p0 / static_cast<double>(shots), pp / static_cast<double>(shots)};
}

CorrectionEstimator::CorrectionEstimator(const Hamiltonian& h, EstimationOptions options)
    : h_(&h), options_(options) {}

std::pair<double, double> CorrectionEstimator::probabilities(int l, std::uint64_t depth, int family) {
  const auto key = std::make_pair(l, depth);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    const D2Params p = d2_params(l, depth);
    const std::vector<double> phis{0.0, kPi / 2.0};
    std::vector<std::pair<double, double>> probs;
    if (h_->n() == 1) {
      probs = d2_probabilities_exact(*h_, p, phis);
    } else {
      for (std::size_t i = 0; i < phis.size(); ++i) {
        Stream s = Stream::derive(options_.sampleSeed, (static_cast<std::uint64_t>(l) << 40) ^ (depth << 1) ^ i);
        probs.push_back(d2_probabilities_sampled(*h_, p, phis[i], options_.sampledShots, s));
      }
    }
    it = cache_.emplace(key, std::move(probs)).first;
  }
  return it->second[static_cast<std::size_t>(family)];
}

CorrectionPair CorrectionEstimator::estimate(int l, double eps, double t, Stream& rng) {
  if (l <= 0) throw InvalidArgument("CorrectionEstimator: l must be positive");
  if (!(eps > 0) || !(t > 0)) throw InvalidArgument("CorrectionEstimator: eps and t must be positive");
  const RpeSchedule schedule = rpe_schedule(eps / (std::sqrt(2.0) * t), options_.deltaSup);
  const std::uint64_t base = rng.next();
  for (int attempt = 0; attempt < options_.retryLimit; ++attempt) {
    ++attempts_;
    double v[2];
    for (int family = 0; family < 2; ++family) {
      Stream s = Stream::derive(base, static_cast<std::uint64_t>(2 * attempt + family));
      const ProbabilityOracle oracle = [this, l, family](std::uint64_t depth) {
        return probabilities(l, depth, family);
      };
      v[family] = rpe_run(oracle, schedule, s).estimate;
    }
    // v_0 is close to 2 pi A cos(theta) > pi, so lift it out of (-pi, pi].
    const double v0 = v[0] + 2.0 * kPi;
    const double v1 = v[1];
    if (std::hypot(v0, v1) / (2.0 * kPi) <= 0.5) continue;
    const Complex z = Complex(v0, -v1) / (2.0 * kPi);
    CorrectionPair c;
    c.k = l;
    c.A = std::abs(z);
    c.theta = wrap_angle(std::arg(z));
    c.source = CorrectionSource::kEstimated;
    return c;
  }
  throw NumericalError("CorrectionEstimator: retry limit exceeded");
}

CorrectionTable estimate_corrections(const Hamiltonian& h, int K, double eps, double t,
                                     Stream& rng, CorrectionMode mode,
                                     const EstimationOptions& options) {
  if (!(eps > 0) || !(t > 0)) throw InvalidArgument("estimate_corrections: eps and t must be positive");
  if (mode == CorrectionMode::kOracle) return exact_correction_table(h, K);
  CorrectionTable table;
  table.K = K;
  table.entries.resize(static_cast<std::size_t>(2 * K + 1));
  table.at(0) = CorrectionPair{};
  CorrectionEstimator est(h, options);
  for (int l = 1; l <= K; ++l) {
    Stream s = rng.split(static_cast<std::uint64_t>(l));
    const CorrectionPair c = est.estimate(l, eps, t, s);
    table.at(l) = c;
    table.at(-l) = CorrectionPair{-l, c.A, wrap_angle(-c.theta), c.source};
  }
  return table;
}

CompiledPlan make_compiled_plan(const FourierModel& model, const CorrectionTable& corrections,
                                double t, double eps) {
  if (!(t > 0) || !(eps > 0)) throw InvalidArgument("make_compiled_plan: t and eps must be positive");
  if (corrections.K < model.K) throw InvalidArgument("make_compiled_plan: correction table too short");
  CompiledPlan plan;
  plan.model = model;
  plan.corrections = corrections;
  plan.t = t;
  plan.eps = eps;
  for (int k = -model.K; k <= model.K; ++k) {
    const double a = corrections.at(k).A;
    if (!(a > 0)) throw InvalidArgument("make_compiled_plan: correction amplitude must be positive");
    plan.graveBeta += std::abs(model.coeff(k)) / a;
  }
  for (int k = -model.K; k <= model.K; ++k)
    plan.graveP.push_back(plan.graveBeta > 0 ? std::abs(model.coeff(k)) / (corrections.at(k).A * plan.graveBeta) : 0.0);
  plan.graveN = plan.graveBeta > 0 ? iteration_count(plan.graveBeta, t, eps / 3.0) : 0;
  return plan;
}

TrajectoryBatch run_algorithm4(const CompiledPlan& plan, const Hamiltonian& h,
                               const State& psi, std::uint64_t trajectories,
                               std::uint64_t seed) {
  require_psi(h, psi);
  const auto& m = plan.model;
  const Index d = h.dim();
  const int n = h.n();
  struct PerK {
    std::uint64_t M = 0;
    Operator pre, post, rot, topFwd, topInv;
    std::unique_ptr<ConjugatedPropagator> fwd, inv;
  };
  std::vector<PerK> per(static_cast<std::size_t>(2 * m.K + 1));
  if (plan.graveN > 0) {
    for (int k = -m.K; k <= m.K; ++k) {
      auto& p = per[static_cast<std::size_t>(k + m.K)];
      p.M = compiled_inner_steps(k);
      // (e^{-ik pi Z/4} e^{i theta^ Z/2}) on the control before the inner layer.
      p.pre = z_rotation(k * kPi / 4.0 - plan.corrections.at(k).theta / 2.0);
      p.post = p.pre.adjoint();
      p.rot = xy_rotation(m.phase(k), plan.graveBeta * plan.t / static_cast<double>(plan.graveN));
      if (p.M > 0) {
        const double tau = k * kPi / (2.0 * static_cast<double>(p.M));
        p.fwd = std::make_unique<ConjugatedPropagator>(h, tau);
        p.inv = std::make_unique<ConjugatedPropagator>(h, -tau);
        p.topFwd = expm_hermitian(h, k * kPi / 2.0);
        p.topInv = p.topFwd.adjoint();
      }
    }
  }
  auto apply_control = [d](State& s, const Operator& u2) {
    State a = u2(0, 0) * s.head(d) + u2(0, 1) * s.tail(d);
    State b = u2(1, 0) * s.head(d) + u2(1, 1) * s.tail(d);
    s.head(d) = a;
    s.tail(d) = b;
  };
  std::vector<double> weights;
  for (int k = -m.K; k <= m.K; ++k) weights.push_back(plan.probability(k));
  std::optional<FrequencySampler> sampler;
  if (plan.graveN > 0) sampler.emplace(weights, m.K);

  const State start = plus_tensor(psi);
  TrajectoryBatch batch;
  batch.seed = seed;
  std::vector<std::uint64_t> words;
  State tmp(d);
  for (std::uint64_t w = 0; w < trajectories; ++w) {
    Stream traj = trajectory_stream(seed, w);
    Stream kstream = traj.split(1);
    Stream wstream = traj.split(2);
    State s = start;
    std::vector<int> ks;
    std::uint64_t queries = 0;
    for (std::uint64_t step = 0; step < plan.graveN; ++step) {
      const int k = sampler->sample(kstream);
      ks.push_back(k);
      const auto& p = per[static_cast<std::size_t>(k + m.K)];
      apply_control(s, p.pre);
      if (p.M > 0) {
        words.resize(p.M);
        for (auto& v : words) v = sample_word_index(n, wstream);
        State b = s.tail(d);
        for (std::uint64_t i = 0; i < p.M; ++i) { tmp.noalias() = p.fwd->conjugated(words[i]) * b; b.swap(tmp); }
        s.head(d) = p.topFwd * s.head(d);
        s.tail(d) = b;
        apply_control(s, p.rot);
        b = s.tail(d);
        for (std::uint64_t i = p.M; i-- > 0;) { tmp.noalias() = p.inv->conjugated(words[i]) * b; b.swap(tmp); }
        s.head(d) = p.topInv * s.head(d);
        s.tail(d) = b;
      } else {
        apply_control(s, p.rot);
      }
      apply_control(s, p.post);
      queries += 2 * p.M;
    }
    batch.states.push_back(std::move(s));
    batch.ks.push_back(std::move(ks));
    batch.queries.push_back(queries);
    batch.streamKeys.push_back(traj.key());
  }
  return batch;
}

std::vector<std::uint64_t> sample_algorithm4_queries(const CompiledPlan& plan,
                                                     std::uint64_t trajectories,
                                                     std::uint64_t seed) {
  std::vector<std::uint64_t> out;
  if (plan.graveN == 0) return std::vector<std::uint64_t>(trajectories, 0);
  std::vector<double> weights;
  for (int k = -plan.K(); k <= plan.K(); ++k) weights.push_back(plan.probability(k));
  const FrequencySampler sampler(weights, plan.K());
  for (std::uint64_t w = 0; w < trajectories; ++w) {
    Stream kstream = trajectory_stream(seed, w).split(1);
    std::uint64_t q = 0;
    for (std::uint64_t step = 0; step < plan.graveN; ++step) q += 2 * compiled_inner_steps(sampler.sample(kstream));
    out.push_back(q);
  }
  return out;
}

double analytic_cost_compiled(const CompiledPlan& plan) {
  double perStep = 0;
  for (int k = -plan.K(); k <= plan.K(); ++k)
    perStep += plan.probability(k) * 2.0 * static_cast<double>(compiled_inner_steps(k));
  return static_cast<double>(plan.graveN) * perStep;
}

HPhiDiagnostic h_phi_diagnostic(const CompiledPlan& plan, const Hamiltonian& h) {
  HPhiDiagnostic out;
  const auto& m = plan.model;
  for (int k = -m.K; k <= m.K; ++k) {
    const CorrectionPair exact = correction_exact(h, k, compiled_inner_steps(k));
    const Complex delta = exact.phasor() / plan.corrections.at(k).phasor() - 1.0;
    out.delta.push_back(delta);
    out.bound += 2.0 * std::abs(m.coeff(k)) * std::abs(delta);
  }
  for (double x : verification_grid(m.K)) {
    Complex f = 0;
    for (int k = -m.K; k <= m.K; ++k)
      f += m.coeff(k) * out.delta[static_cast<std::size_t>(k + m.K)] * std::polar(1.0, k * kPi * x);
    out.supFPhi = std::max(out.supFPhi, std::abs(f));
  }
  return out;
}

Operator compiled_effective_hamiltonian(const CompiledPlan& plan, const Hamiltonian& h) {
  const auto& m = plan.model;
  const Index d = h.dim();
  Operator out = Operator::Zero(2 * d, 2 * d);
  for (int k = -m.K; k <= m.K; ++k) {
    const auto& c = plan.corrections.at(k);
    const Operator avg = averaged_w_sandwich(h, k, compiled_inner_steps(k), xy_generator(m.phase(k)));
    const Operator z = control_op(z_rotation(c.theta / 2.0), d);  // e^{-i theta^ Z/2}
    out += (std::abs(m.coeff(k)) / c.A) * z * avg * z.adjoint();
  }
  return out;
}

Operator compensated_hamiltonian(const CompiledPlan& plan, const Hamiltonian& h) {
  const auto& m = plan.model;
  const Index d = h.dim();
  Operator f = Operator::Zero(d, d);
  for (int k = -m.K; k <= m.K; ++k) {
    const CorrectionPair exact = correction_exact(h, k, compiled_inner_steps(k));
    const Complex scale = m.coeff(k) * exact.phasor() / plan.corrections.at(k).phasor();
    f += scale * frequency_operator(h, k);
  }
  Operator out = Operator::Zero(2 * d, 2 * d);
  out.topRightCorner(d, d) = f;
  out.bottomLeftCorner(d, d) = f.adjoint();
  return out;
}

}  // namespace eigenforge
