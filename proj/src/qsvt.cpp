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

#include "eigenforge/qsvt.hpp"

#include "eigenforge/qdrift.hpp"

#include <algorithm>
#include <cmath>

namespace eigenforge {

double qsvt_normalization() { return 2.0 * std::sin(kPi / 10.0); }

double band_high() { return std::sqrt(3.0) / 2.0; }

namespace {

constexpr double kFactorial[8] = {1, 1, 2, 6, 24, 120, 720, 5040};

// Degree-7 polynomial in (x - a) with jets ja at a and jb at b.
// Degree-7 polynomial in u = x - a with jet ja at a and jb at b. The first
// four coefficients come straight from ja, so a zero jet at a is exact.
Eigen::Matrix<double, 8, 1> hermite7(double a, double b, const std::array<double, 4>& ja,
                                     const std::array<double, 4>& jb) {
  const double h = b - a;
  Eigen::Matrix<double, 8, 1> c = Eigen::Matrix<double, 8, 1>::Zero();
  for (int j = 0; j < 4; ++j) c(j) = ja[static_cast<std::size_t>(j)] / kFactorial[j];
  Eigen::Matrix4d m;
  Eigen::Vector4d rhs;
  for (int j = 0; j < 4; ++j) {
    double known = 0;
    for (int p = j; p < 4; ++p) known += c(p) * kFactorial[p] / kFactorial[p - j] * std::pow(h, p - j);
    rhs(j) = jb[static_cast<std::size_t>(j)] - known;
    for (int p = 4; p < 8; ++p) m(j, p - 4) = kFactorial[p] / kFactorial[p - j] * std::pow(h, p - j);
  }
  c.tail<4>() = m.fullPivLu().solve(rhs);
  return c;
}

double poly_derivative(const Eigen::Matrix<double, 8, 1>& c, double u, int order) {
  double acc = 0;
  for (int p = 7; p >= order; --p) acc = acc * u + c(p) * kFactorial[p] / kFactorial[p - order];
  return acc;
}

constexpr double kStubOrigin[2] = {0.0, 1.0};  // zero-jet end of each stub

}  // namespace

double QsvtFunctionPair::band(int s, double x) const {
  const double y = std::clamp(12.0 * std::acos(std::clamp(x, -1.0, 1.0)) / kPi - 3.0, -1.0, 1.0);
  const double g = t * f(y);
  return s == 0 ? std::cos(g) : std::sin(g);
}

std::array<double, 4> QsvtFunctionPair::band_jet(int s, int side) const {
  const double x = side == 0 ? kBandLow : band_high();
  const double yv = side == 0 ? 1.0 : -1.0;
  const auto& fd = side == 0 ? f.derivPlus : f.derivMinus;
  const double c = 12.0 / kPi;
  const double r = 1.0 - x * x;
  const double y1 = -c / std::sqrt(r);
  const double y2 = -c * x / std::pow(r, 1.5);
  const double y3 = -c * (1.0 + 2.0 * x * x) / std::pow(r, 2.5);
  const double g0 = t * f(yv);
  const double g1 = t * fd[0] * y1;
  const double g2 = t * (fd[1] * y1 * y1 + fd[0] * y2);
  const double g3 = t * (fd[2] * y1 * y1 * y1 + 3.0 * fd[1] * y1 * y2 + fd[0] * y3);
  const double co = std::cos(g0), si = std::sin(g0);
  if (s == 0)
    return {co, -si * g1, -co * g1 * g1 - si * g2, si * g1 * g1 * g1 - 3.0 * co * g1 * g2 - si * g3};
  return {si, co * g1, -si * g1 * g1 + co * g2, -co * g1 * g1 * g1 - 3.0 * si * g1 * g2 + co * g3};
}

std::array<double, 4> QsvtFunctionPair::stub_jet(int s, int side, double x) const {
  const auto& c = stubs[static_cast<std::size_t>(s)][static_cast<std::size_t>(side)];
  const double u = x - kStubOrigin[side];
  return {poly_derivative(c, u, 0), poly_derivative(c, u, 1), poly_derivative(c, u, 2),
          poly_derivative(c, u, 3)};
}

double QsvtFunctionPair::operator()(int s, double x) const {
  const double ax = std::min(std::abs(x), 1.0);
  const auto& st = stubs[static_cast<std::size_t>(s)];
  if (ax <= kBandLow) return poly_derivative(st[0], ax, 0);
  if (ax < band_high()) return band(s, ax);
  return poly_derivative(st[1], ax - kStubOrigin[1], 0);
}

QsvtFunctionPair build_function_pair(const TargetFunction& f, double t) {
  if (!(t >= 0)) throw InvalidArgument("build_function_pair: t must be non-negative");
  QsvtFunctionPair pair;
  pair.f = f;
  pair.t = t;
  const std::array<double, 4> zero{};
  for (int s = 0; s < 2; ++s) {
    pair.stubs[static_cast<std::size_t>(s)][0] = hermite7(0.0, kBandLow, zero, pair.band_jet(s, 0));
    pair.stubs[static_cast<std::size_t>(s)][1] = hermite7(1.0, band_high(), zero, pair.band_jet(s, 1));
  }
  double peak = 0;
  for (int i = 0; i <= 20000; ++i) {
    const double x = i / 20000.0;
    for (int s = 0; s < 2; ++s) peak = std::max(peak, std::abs(pair.scaled(s, x)));
  }
  if (peak > 1.0) {
    pair.scale = 1.0 / (peak * (1.0 + 1e-9));
    double again = 0;
    for (int i = 0; i <= 20000; ++i)
      for (int s = 0; s < 2; ++s) again = std::max(again, std::abs(pair.scaled(s, i / 20000.0)));
    if (again > 1.0) throw NumericalError("build_function_pair: stubs violate boundedness after rescale");
  }
  return pair;
}

PairCheck check_function_pair(const QsvtFunctionPair& pair) {
  PairCheck c;
  for (int i = 0; i <= 4000; ++i) {
    const double x = kBandLow + (band_high() - kBandLow) * i / 4000.0;
    c.bandUnitarity = std::max(c.bandUnitarity, std::abs(pair(0, x) * pair(0, x) + pair(1, x) * pair(1, x) - 1.0));
  }
  for (int i = 0; i <= 4000; ++i) {
    const double x = i / 4000.0;
    for (int s = 0; s < 2; ++s) {
      c.evenness = std::max(c.evenness, std::abs(pair(s, -x) - pair(s, x)));
      c.maxScaled = std::max(c.maxScaled, std::abs(pair.scaled(s, x)));
    }
  }
  for (int s = 0; s < 2; ++s) {
    const auto b0 = pair.band_jet(s, 0), b1 = pair.band_jet(s, 1);
    const auto l0 = pair.stub_jet(s, 0, 0.0), l1 = pair.stub_jet(s, 0, kBandLow);
    const auto r0 = pair.stub_jet(s, 1, band_high()), r1 = pair.stub_jet(s, 1, 1.0);
    for (std::size_t j = 0; j < 4; ++j) {
      const double scale = std::max({1.0, std::abs(b0[j]), std::abs(b1[j])});
      c.junction = std::max({c.junction, std::abs(l1[j] - b0[j]) / scale, std::abs(r0[j] - b1[j]) / scale,
                             std::abs(l0[j]), std::abs(r1[j])});
    }
  }
  return c;
}

Hamiltonian hq_of(const Hamiltonian& h) {
  const Index d = h.dim();
  return Hamiltonian(((kPi / 12.0) * (h.traceless() + 3.0 * identity(d))).eval());
}

Operator b_s_operator(const Hamiltonian& h, int s) {
  if (s != 0 && s != 1) throw InvalidArgument("b_s_operator: s must be 0 or 1");
  const Hamiltonian hq = hq_of(h);
  const Index d = h.dim();
  const auto& v = hq.eigenvectors();
  const auto& e = hq.eigenvalues();
  const Operator c = v * e.array().cos().matrix().cast<Complex>().asDiagonal() * v.adjoint();
  const Operator sn = v * e.array().sin().matrix().cast<Complex>().asDiagonal() * v.adjoint();
  Operator mid(2 * d, 2 * d);
  mid << c, Complex(0, 1) * sn, Complex(0, 1) * sn, c;
  Operator ps = Operator::Zero(2, 2), other = Operator::Zero(2, 2);
  ps(s, s) = 1.0;
  other(1 - s, 1 - s) = 1.0;
  return kron(ps, mid) + kron(other, identity(2 * d));
}

Operator b_s_operator_factored(const Hamiltonian& h, int s) {
  if (s != 0 && s != 1) throw InvalidArgument("b_s_operator_factored: s must be 0 or 1");
  const Hamiltonian hq = hq_of(h);
  const Index d = h.dim();
  Operator had(2, 2);
  had << 1, 1, 1, -1;
  had /= std::sqrt(2.0);
  const Operator hadA = kron(identity(2), kron(had, identity(d)));
  auto ctrl2 = [&](const Operator& u, int a, int b) {
    Operator pa = Operator::Zero(2, 2), pb = Operator::Zero(2, 2);
    pa(a, a) = 1.0;
    pb(b, b) = 1.0;
    const Operator proj = kron(pa, pb);
    return (kron(proj, u) + kron((identity(4) - proj).eval(), identity(d))).eval();
  };
  return hadA * ctrl2(expm_hermitian(hq, 1.0), s, 1) * ctrl2(expm_hermitian(hq, -1.0), s, 0) * hadA;
}

Operator qsvt_spectral_operator(const QsvtFunctionPair& pair, const Hamiltonian& h) {
  const Hamiltonian hq = hq_of(h);
  const auto& e = hq.eigenvalues();
  State vals(e.size());
  for (Index m = 0; m < e.size(); ++m) {
    const double x = std::cos(e(m));
    vals(m) = Complex(pair(0, x), -pair(1, x));
  }
  return hq.eigenvectors() * vals.asDiagonal() * hq.eigenvectors().adjoint();
}

double ChebyshevModel::evaluate(int s, double x) const {
  const double th = std::acos(std::clamp(x, -1.0, 1.0));
  double acc = 0;
  const auto& c = coeffs[static_cast<std::size_t>(s)];
  for (int k = 0; k <= K[static_cast<std::size_t>(s)]; ++k) acc += c[static_cast<std::size_t>(k)] * std::cos(k * th);
  return acc;
}

double cosine_series_coefficient(const std::function<double(double)>& g, int k) {
  if (k < 0) throw InvalidArgument("cosine_series_coefficient: k must be non-negative");
  const double cuts[] = {0.0, 1.0 / 6.0, 1.0 / 3.0, 0.5, 2.0 / 3.0, 5.0 / 6.0, 1.0};
  auto fn = [&g, k](double x) { return g(x) * std::cos(k * kPi * x); };
  double total = 0;
  for (int i = 0; i < 6; ++i) total += integrate_simpson(fn, cuts[i], cuts[i + 1], 1e-13, std::max<std::int64_t>(16, k));
  return k == 0 ? total : 2.0 * total;
}

double chebyshev_coefficient(const QsvtFunctionPair& pair, int s, int k) {
  // Kinks of g sit where cos(pi x) meets the band edges or zero.
  return cosine_series_coefficient([&pair, s](double x) { return pair.scaled(s, std::cos(kPi * x)); }, k);
}

ChebyshevModel chebyshev_model(const QsvtFunctionPair& pair, double epsTarget) {
  if (!(epsTarget > 0)) throw InvalidArgument("chebyshev_model: target must be positive");
  ChebyshevModel model;
  model.target = epsTarget;
  model.scale = pair.scale;
  constexpr int kGrid = 4001;
  constexpr int kMaxCutoff = 10000;
  for (int s = 0; s < 2; ++s) {
    const auto si = static_cast<std::size_t>(s);
    std::vector<double> xs(kGrid), residual(kGrid);
    for (int i = 0; i < kGrid; ++i) {
      xs[static_cast<std::size_t>(i)] = static_cast<double>(i) / (kGrid - 1);
      residual[static_cast<std::size_t>(i)] = pair.scaled(s, std::cos(kPi * xs[static_cast<std::size_t>(i)]));
    }
    auto& c = model.coeffs[si];
    int K = 0;
    for (;; ++K) {
      if (K > kMaxCutoff) throw NumericalError("chebyshev_model: cutoff exceeds 10^4");
      c.push_back(chebyshev_coefficient(pair, s, K));
      double err = 0;
      for (int i = 0; i < kGrid; ++i) {
        auto& r = residual[static_cast<std::size_t>(i)];
        r -= c.back() * std::cos(K * kPi * xs[static_cast<std::size_t>(i)]);
        err = std::max(err, std::abs(r));
      }
      if (err < epsTarget) {
        model.gridError[si] = err;
        break;
      }
    }
    model.K[si] = K;
    // Tail certificate: explicit terms up to 4K plus a |c_k| <= B/k^4 bound.
    const int L = std::max(4, 4 * K);
    double tailAbs = 0, tailPow = 0, B = 0;
    for (int k = K + 1; k <= L; ++k) {
      const double ck = std::abs(chebyshev_coefficient(pair, s, k));
      tailAbs += ck;
      tailPow += 0.5 * ck * ck;
      if (4 * k > L) B = std::max(B, ck * std::pow(static_cast<double>(k), 4));
    }
    model.tailPower[si] = tailPow;
    model.certifiedError[si] = std::max(model.gridError[si], tailAbs + B / (3.0 * std::pow(static_cast<double>(L), 3)));
  }
  return model;
}

QsvtApplyResult idealized_qsvt_apply(const ChebyshevModel& model, const Hamiltonian& h,
                                     const State& psi) {
  if (psi.size() != h.dim()) throw InvalidArgument("idealized_qsvt_apply: dimension mismatch");
  const Hamiltonian hq = hq_of(h);
  const Index d = h.dim();
  const auto& v = hq.eigenvectors();
  const auto& e = hq.eigenvalues();
  // U = sum_s |s><s| (x) [[P_s, Q_s], [Q_s, -P_s]], Q_s = sqrt(I - P_s^2).
  Operator u = Operator::Zero(4 * d, 4 * d);
  for (int s = 0; s < 2; ++s) {
    State p(e.size()), q(e.size());
    for (Index m = 0; m < e.size(); ++m) {
      const double pv = model.evaluate(s, std::cos(e(m)));
      p(m) = pv;
      q(m) = std::sqrt(std::max(0.0, 1.0 - pv * pv));
    }
    const Operator P = v * p.asDiagonal() * v.adjoint();
    const Operator Q = v * q.asDiagonal() * v.adjoint();
    u.block(2 * d * s, 2 * d * s, d, d) = P;
    u.block(2 * d * s, 2 * d * s + d, d, d) = Q;
    u.block(2 * d * s + d, 2 * d * s, d, d) = Q;
    u.block(2 * d * s + d, 2 * d * s + d, d, d) = -P;
  }
  Operator had(2, 2);
  had << 1, 1, 1, -1;
  had /= std::sqrt(2.0);
  Operator sdag = Operator::Zero(2, 2);
  sdag(0, 0) = 1.0;
  sdag(1, 1) = Complex(0, -1);
  const Operator hs = kron(had, identity(2 * d));
  const Operator total = hs * kron(sdag, identity(2 * d)) * u * hs;
  QsvtApplyResult r;
  r.unitarityDefect = unitarity_defect(total);
  const double norm = std::sin(kPi / 10.0) * model.scale;
  r.output = total.topLeftCorner(d, d) * psi / norm;
  r.blockNorm = r.output.norm();
  r.errorBound = (model.certifiedError[0] + model.certifiedError[1]) / (2.0 * norm);
  return r;
}

double cost_model_qsvt(int KQ, double eps, const QsvtCostKnobs& knobs) {
  if (KQ <= 0 || !(eps > 0)) throw InvalidArgument("cost_model_qsvt: inputs must be positive");
  const double inner = static_cast<double>(iteration_count(1.0, knobs.cTime, eps / (knobs.c0 * KQ)));
  return KQ * inner * knobs.ampFactor;
}

QsvtCost analytic_cost_qsvt(const TargetFunction& f, double t, double eps, const QsvtCostKnobs& knobs) {
  const QsvtFunctionPair pair = build_function_pair(f, t);
  const ChebyshevModel model = chebyshev_model(pair, eps * knobs.kdefFraction);
  QsvtCost c;
  c.KQ = std::max(1, model.total());
  c.queries = cost_model_qsvt(c.KQ, eps, knobs);
  return c;
}

}  // namespace eigenforge
