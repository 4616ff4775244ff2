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

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eigenforge {

namespace {

// Polynomial with analytic endpoint derivatives.
TargetFunction polynomial_target(std::string name, std::vector<double> coeffs) {
  auto deriv = [coeffs](double x, int order) {
    double acc = 0;
    for (std::size_t m = static_cast<std::size_t>(order); m < coeffs.size(); ++m) {
      double falling = 1;
      for (int r = 0; r < order; ++r) falling *= static_cast<double>(m - static_cast<std::size_t>(r));
      acc += coeffs[m] * falling * std::pow(x, static_cast<double>(m) - order);
    }
    return acc;
  };
  TargetFunction f;
  f.name = std::move(name);
  f.value = [deriv](double x) { return deriv(x, 0); };
  for (int j = 0; j < 3; ++j) {
    f.derivMinus[static_cast<std::size_t>(j)] = deriv(-1.0, j + 1);
    f.derivPlus[static_cast<std::size_t>(j)] = deriv(1.0, j + 1);
  }
  return f;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("function spec: cannot parse number '" + item + "'");
    }
    if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos)
      throw InvalidArgument("function spec: trailing characters in '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("function spec: empty coefficient list");
  return out;
}

double fd1(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}
double fd2(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}
double fd3(const std::function<double(double)>& f, double x, double h) {
  return (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (2 * h * h * h);
}

template <typename T, typename Fn>
T simpson_levels(const Fn& fn, double a, double b, double tol, std::int64_t panels) {
  if (panels < 2) panels = 2;
  if (panels % 2) ++panels;
  constexpr std::int64_t kMaxPanels = std::int64_t{1} << 22;
  double h = (b - a) / static_cast<double>(panels);
  T ends = fn(a) + fn(b);
  T odd{}, even{};
  for (std::int64_t i = 1; i < panels; ++i) {
    const T v = fn(a + static_cast<double>(i) * h);
    if (i % 2)
      odd += v;
    else
      even += v;
  }
  T prev = (ends + 4.0 * odd + 2.0 * even) * (h / 3.0);
  while (panels < kMaxPanels) {
    panels *= 2;
    h *= 0.5;
    even += odd;
    odd = T{};
    for (std::int64_t i = 1; i < panels; i += 2) odd += fn(a + static_cast<double>(i) * h);
    const T next = (ends + 4.0 * odd + 2.0 * even) * (h / 3.0);
    if (std::abs(next - prev) <= tol) return next;
    prev = next;
  }
  throw NumericalError("integrate_simpson: no convergence at 2^22 panels");
}

}  // namespace

TargetFunction make_target_function(const std::string& spec) {
  if (spec.empty()) throw InvalidArgument("function spec is empty");
  if (spec == "x") return polynomial_target("x", {0, 1});
  if (spec == "x^2") return polynomial_target("x^2", {0, 0, 1});
  if (spec == "x^3") return polynomial_target("x^3", {0, 0, 0, 1});
  if (spec == "zero" || spec == "0") return polynomial_target("zero", {0});
  if (spec == "cos(pi x/2)" || spec == "cos") {
    const double a = kPi / 2;
    TargetFunction f;
    f.name = "cos(pi x/2)";
    f.value = [a](double x) { return std::cos(a * x); };
    f.derivMinus = {a, 0.0, -a * a * a};
    f.derivPlus = {-a, 0.0, a * a * a};
    return f;
  }
  if (spec.rfind("const:", 0) == 0) {
    auto v = parse_number_list(spec.substr(6));
    if (v.size() != 1) throw InvalidArgument("const: expects a single value");
    return polynomial_target(spec, {v[0]});
  }
  if (spec.rfind("poly:", 0) == 0) return polynomial_target(spec, parse_number_list(spec.substr(5)));
  throw InvalidArgument("unknown function '" + spec + "'");
}

std::vector<std::string> builtin_function_names() { return {"x", "x^2", "cos(pi x/2)", "x^3"}; }

BoundaryCheck check_boundary_derivatives(const TargetFunction& f, double relTol) {
  BoundaryCheck r;
  for (double x0 : {-1.0, 1.0}) {
    const auto& d = x0 < 0 ? f.derivMinus : f.derivPlus;
    const std::array<double, 3> numeric = {fd1(f.value, x0, 1e-4), fd2(f.value, x0, 1e-3),
                                           fd3(f.value, x0, 1e-3)};
    for (std::size_t j = 0; j < 3; ++j) {
      const double dev = std::abs(numeric[j] - d[j]) / std::max(1.0, std::abs(d[j]));
      r.maxRelativeDeviation = std::max(r.maxRelativeDeviation, dev);
    }
  }
  r.ok = r.maxRelativeDeviation <= relTol;
  return r;
}

SmoothingMatrix smoothing_matrix() {
  SmoothingMatrix phi;
  phi << 9.0 / 16, 1.0 / 16, -9.0 / 16, -1.0 / 16,
         2.0 / 3, 1.0 / 24, 2.0 / 3, 1.0 / 24,
         -1.0 / 16, -1.0 / 16, 1.0 / 16, 1.0 / 16,
         -1.0 / 6, -1.0 / 24, -1.0 / 6, -1.0 / 24;
  return phi;
}

GfCoefficients gf_coefficients(const TargetFunction& f, const SmoothingMatrix& phi) {
  const double pi2 = kPi * kPi, pi3 = pi2 * kPi;
  Eigen::Vector4d cin(f.value(-1.0), 4 * f.derivMinus[1] / pi2, f.value(1.0),
                      4 * f.derivPlus[1] / pi2);
  Eigen::Vector4d sv(2 * f.derivMinus[0] / kPi, 8 * f.derivMinus[2] / pi3,
                      2 * f.derivPlus[0] / kPi, 8 * f.derivPlus[2] / pi3);
  const Eigen::Vector4d c = phi * cin;
  const Eigen::Vector4d s = phi * sv;
  GfCoefficients g;
  for (int i = 0; i < 4; ++i) {
    g.C[static_cast<std::size_t>(i)] = c(i);
    g.S[static_cast<std::size_t>(i)] = s(i);
  }
  return g;
}

double gf_derivative(const GfCoefficients& g, double x, int order) {
  double acc = 0;
  const double shift = order * kPi / 2;
  for (int m = 1; m <= 4; ++m) {
    const double w = m * kPi;
    const double scale = std::pow(w, order);
    const double c = g.C[static_cast<std::size_t>(m - 1)];
    const double s = g.S[static_cast<std::size_t>(m - 1)] / m;
    acc += scale * (c * std::cos(w * x + shift) + s * std::sin(w * x + shift));
  }
  return acc;
}

PeriodicExtension::PeriodicExtension(TargetFunction f, const SmoothingMatrix& phi)
    : base_(std::move(f)), gf_(gf_coefficients(base_, phi)) {
  if (!base_.value) throw InvalidArgument("PeriodicExtension: missing evaluator");
}

double PeriodicExtension::operator()(double x) const {
  return x < 0 ? left_branch(x) : right_branch(x);
}

double tilde_f_eval(const PeriodicExtension& ext, double x) {
  if (!(x >= -1.0 - 1e-12 && x <= 1.0 + 1e-12))
    throw InvalidArgument("tilde_f_eval: x outside [-1, 1]");
  return ext(std::clamp(x, -1.0, 1.0));
}

double SeamReport::max() const {
  double m = 0;
  for (double v : atZero) m = std::max(m, v);
  for (double v : atWrap) m = std::max(m, v);
  return m;
}

SeamReport seam_report(const PeriodicExtension& ext) {
  const auto& f = ext.base();
  SeamReport r;
  std::array<double, 4> minus = {f.value(-1.0), f.derivMinus[0], f.derivMinus[1], f.derivMinus[2]};
  std::array<double, 4> plus = {f.value(1.0), f.derivPlus[0], f.derivPlus[1], f.derivPlus[2]};
  for (int j = 0; j < 4; ++j) {
    const double scale = std::pow(2.0, j);
    const auto sj = static_cast<std::size_t>(j);
    r.atZero[sj] = std::abs(gf_derivative(ext.gf(), 0.0, j) - scale * minus[sj]);
    r.atWrap[sj] = std::abs(gf_derivative(ext.gf(), -1.0, j) - scale * plus[sj]);
  }
  return r;
}

SeamReport seam_report_finite_difference(const PeriodicExtension& ext, double h) {
  const std::function<double(double)> left = [&ext](double x) { return ext.left_branch(x); };
  const std::function<double(double)> right = [&ext](double x) { return ext.right_branch(x); };
  auto derivs = [h](const std::function<double(double)>& fn, double x) {
    return std::array<double, 4>{fn(x), fd1(fn, x, h), fd2(fn, x, h), fd3(fn, x, h)};
  };
  SeamReport r;
  const auto l0 = derivs(left, 0.0), r0 = derivs(right, 0.0);
  const auto lw = derivs(left, -1.0), rw = derivs(right, 1.0);
  for (std::size_t j = 0; j < 4; ++j) {
    r.atZero[j] = std::abs(l0[j] - r0[j]);
    r.atWrap[j] = std::abs(lw[j] - rw[j]);
  }
  return r;
}

double integrate_simpson(const std::function<double(double)>& fn, double a, double b, double tol,
                         std::int64_t initialPanels) {
  return simpson_levels<double>(fn, a, b, tol, initialPanels);
}

Complex fourier_coefficient(const PeriodicExtension& ext, int k) {
  if (std::abs(k) > 10000) throw InvalidArgument("fourier_coefficient: |k| above 10^4");
  const double w = k * kPi;
  const std::int64_t panels = std::max<std::int64_t>(64, 8 * std::abs(static_cast<std::int64_t>(k)));
  auto left = [&](double x) { return std::polar(1.0, -w * x) * ext.left_branch(x); };
  auto right = [&](double x) { return std::polar(1.0, -w * x) * ext.right_branch(x); };
  const Complex a = simpson_levels<Complex>(left, -1.0, 0.0, 2e-11, panels);
  const Complex b = simpson_levels<Complex>(right, 0.0, 1.0, 2e-11, panels);
  return 0.5 * (a + b);
}

std::vector<Complex> fourier_coefficients_fft(const PeriodicExtension& ext, int kmax, int logSize) {
  const std::size_t m = std::size_t{1} << logSize;
  if (kmax < 0 || static_cast<std::size_t>(kmax) >= m / 2)
    throw InvalidArgument("fourier_coefficients_fft: kmax too large for the grid");
  std::vector<Complex> samples(m), spectrum;
  for (std::size_t j = 0; j < m; ++j)
    samples[j] = ext(-1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(m));
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, samples);
  std::vector<Complex> out(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k)
    out[static_cast<std::size_t>(k)] =
        (k % 2 ? -1.0 : 1.0) * spectrum[static_cast<std::size_t>(k)] / static_cast<double>(m);
  return out;
}

Complex CoefficientCache::operator()(int k) {
  if (k < 0) return std::conj((*this)(-k));
  while (static_cast<int>(values_.size()) <= k)
    values_.push_back(fourier_coefficient(*ext_, static_cast<int>(values_.size())));
  return values_[static_cast<std::size_t>(k)];
}

double FourierModel::evaluate(double x) const {
  double acc = coeff(0).real();
  for (int k = 1; k <= K; ++k) acc += 2.0 * (coeff(k) * std::polar(1.0, k * kPi * x)).real();
  return acc;
}

FourierModel build_model(const std::vector<Complex>& nonNegative, int K) {
  if (K < 0 || static_cast<int>(nonNegative.size()) <= K)
    throw InvalidArgument("build_model: not enough coefficients");
  FourierModel m;
  m.K = K;
  m.coeffs.resize(static_cast<std::size_t>(2 * K + 1));
  m.phases.resize(m.coeffs.size());
  for (int k = -K; k <= K; ++k) {
    Complex c = k >= 0 ? nonNegative[static_cast<std::size_t>(k)]
                       : std::conj(nonNegative[static_cast<std::size_t>(-k)]);
    if (k == 0) c = Complex(c.real(), 0.0);
    const auto idx = static_cast<std::size_t>(k + K);
    m.coeffs[idx] = c;
    m.phases[idx] = k == 0 ? (c.real() >= 0 ? 0.0 : kPi) : std::arg(c);
    m.beta += std::abs(c);
  }
  return m;
}

std::vector<double> verification_grid(int K) {
  std::vector<double> grid;
  grid.reserve(4001 + static_cast<std::size_t>(2 * K));
  for (int i = 0; i <= 4000; ++i) grid.push_back(-1.0 + 2.0 * i / 4000.0);
  for (int j = 0; j < 2 * K; ++j) grid.push_back(std::cos(kPi * (j + 0.5) / (2.0 * K)));
  return grid;
}

double model_sup_error(const PeriodicExtension& ext, const FourierModel& model) {
  double sup = 0;
  for (double x : verification_grid(model.K))
    sup = std::max(sup, std::abs(ext(x) - model.evaluate(x)));
  return sup;
}

FourierModel select_cutoff(const PeriodicExtension& ext, double supTarget) {
  CoefficientCache cache(ext);
  return select_cutoff(cache, supTarget);
}

FourierModel select_cutoff(CoefficientCache& cache, double supTarget) {
  if (!(supTarget > 0)) throw InvalidArgument("select_cutoff: target must be positive");
  constexpr int kMaxK = 10000;
  auto model_at = [&](int K) {
    std::vector<Complex> c(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) c[static_cast<std::size_t>(k)] = cache(k);
    FourierModel m = build_model(c, K);
    m.supError = model_sup_error(cache.extension(), m);
    return m;
  };
  FourierModel best = model_at(0);
  if (best.supError < supTarget) return best;
  int lo = 0, hi = 1;
  while (true) {
    best = model_at(hi);
    if (best.supError < supTarget) break;
    lo = hi;
    if (hi == kMaxK) throw NumericalError("select_cutoff: K exceeds 10^4");
    hi = std::min(2 * hi, kMaxK);
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    FourierModel m = model_at(mid);
    if (m.supError < supTarget) {
      hi = mid;
      best = std::move(m);
    } else {
      lo = mid;
    }
  }
  return best;
}

DecayReport decay_diagnostics(CoefficientCache& cache, const FourierModel& model,
                              bool includeProxyRange) {
  DecayReport r;
  r.beta = model.beta;
  const int K = model.K;
  for (int k = 1; k <= K; ++k) {
    const double a = std::abs(model.coeff(k));
    r.sumAbsK += 2.0 * a * k;
    r.sumAbsK2 += 2.0 * a * k * k;
  }
  // Coefficients below the quadrature noise floor count as zero; otherwise
  // k^4 amplifies roundoff for band-limited extensions.
  auto resolved = [](double a) { return a > kCoefficientFloor ? a : 0.0; };
  for (int k = 1; k <= 4 * K; ++k) {
    const double a = std::abs(cache(k));
    r.maxDecay = std::max(r.maxDecay, resolved(a) * std::pow(k, 4));
    if (k > K) r.tailPower += 2.0 * a * a;
  }
  if (includeProxyRange) {
    for (int k = 10; k <= 200; ++k) {
      const double v = resolved(std::abs(cache(k))) * std::pow(k, 4);
      if (k <= 50) r.decayLow = std::max(r.decayLow, v);
      if (k >= 50) r.decayHigh = std::max(r.decayHigh, v);
    }
  }
  r.C3 = r.beta * r.beta * r.beta * r.sumAbsK2;
  r.C4 = r.beta * r.sumAbsK2;
  return r;
}

double weighted_abs_sum_with_tail(CoefficientCache& cache, int L) {
  if (L <= 0) return 0.0;
  double sum = 0, b = 0;
  for (int k = 1; k <= L; ++k) {
    const double a = std::abs(cache(k));
    sum += 2.0 * a * k;
    if (4 * k > L) b = std::max(b, a * std::pow(k, 4));
  }
  return sum + b / (static_cast<double>(L) * L);
}

}  // namespace eigenforge
