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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace eigenforge {

template <typename Real>
using ComplexT = std::complex<Real>;
template <typename Real>
using OperatorT = Eigen::Matrix<ComplexT<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using StateT = Eigen::Matrix<ComplexT<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Complex = ComplexT<double>;
using Operator = OperatorT<double>;
using State = StateT<double>;
using RealVector = RealVectorT<double>;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;

// Bad input: maps to the CLI's validation exit code.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical guard tripped (non-unitarity, failed convergence, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_power_of_two(Index dim) { return dim >= 1 && (dim & (dim - 1)) == 0; }

inline int qubit_count(Index dim) {
  if (!is_power_of_two(dim)) throw InvalidArgument("dimension is not a power of two");
  int n = 0;
  while ((Index{1} << n) < dim) ++n;
  return n;
}

template <typename DA, typename DB>
auto kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b)
    -> Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> {
  using Scalar = typename DA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                            a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <typename Real = double>
OperatorT<Real> identity(Index dim) {
  return OperatorT<Real>::Identity(dim, dim);
}

// Operator norm (largest singular value).
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real operator_norm(
    const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(
      a.eval());
  return svd.singularValues()(0);
}

template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real unitarity_defect(
    const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  auto prod = (u.adjoint() * u).eval();
  prod -= Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(u.rows(), u.cols());
  return operator_norm(prod);
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// 1-norm tr sqrt(A^dag A). Hermitian inputs go through the eigensolver.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real trace_norm(
    const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.size() == 0) return 0;
  if (is_hermitian(a, 1e-12)) {
    Mat h = (0.5 * (a + a.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Mat> svd(a.eval());
  return svd.singularValues().sum();
}

template <typename DA, typename DB>
typename Eigen::NumTraits<typename DA::Scalar>::Real trace_distance(
    const Eigen::MatrixBase<DA>& rho, const Eigen::MatrixBase<DB>& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw InvalidArgument("trace_distance: dimension mismatch");
  return trace_norm((rho - sigma).eval());
}

// Traces out the most significant qubit (the control register).
template <typename Derived>
auto partial_trace_first_qubit(const Eigen::MatrixBase<Derived>& rho)
    -> Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> {
  if (rho.rows() < 4 || rho.rows() != rho.cols() || !is_power_of_two(rho.rows()))
    throw InvalidArgument("partial_trace_first_qubit: need a square operator with dim >= 4");
  const Index h = rho.rows() / 2;
  return rho.topLeftCorner(h, h) + rho.bottomRightCorner(h, h);
}

template <typename Derived>
auto density(const Eigen::MatrixBase<Derived>& psi)
    -> Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> {
  return psi * psi.adjoint();
}

// Reduced density operator of a pure state on H_c (x) H.
template <typename Derived>
auto reduced_system_state(const Eigen::MatrixBase<Derived>& psi)
    -> Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> {
  const Index h = psi.size() / 2;
  auto top = psi.head(h);
  auto bottom = psi.tail(h);
  return top * top.adjoint() + bottom * bottom.adjoint();
}

// ---------------------------------------------------------------------------
// Pauli words

struct PauliWord {
  std::vector<std::uint8_t> indices;  // 0:I 1:X 2:Y 3:Z, first entry = most significant qubit

  int size() const { return static_cast<int>(indices.size()); }
  bool operator==(const PauliWord&) const = default;
};

PauliWord pauli_word_from_index(int n, std::uint64_t index);
std::uint64_t pauli_word_index(const PauliWord& word);
std::string to_string(const PauliWord& word);

template <typename Real = double>
OperatorT<Real> pauli_matrix_1q(int index) {
  using C = ComplexT<Real>;
  OperatorT<Real> p = OperatorT<Real>::Zero(2, 2);
  switch (index) {
    case 0: p(0, 0) = 1; p(1, 1) = 1; break;
    case 1: p(0, 1) = 1; p(1, 0) = 1; break;
    case 2: p(0, 1) = C(0, -1); p(1, 0) = C(0, 1); break;
    case 3: p(0, 0) = 1; p(1, 1) = -1; break;
    default: throw InvalidArgument("Pauli index must lie in {0,1,2,3}");
  }
  return p;
}

template <typename Real = double>
OperatorT<Real> pauli_matrix(const PauliWord& word) {
  if (word.indices.empty()) throw InvalidArgument("pauli_matrix: empty word");
  OperatorT<Real> out = pauli_matrix_1q<Real>(word.indices[0]);
  for (std::size_t q = 1; q < word.indices.size(); ++q)
    out = kron(out, pauli_matrix_1q<Real>(word.indices[q]));
  return out;
}

// ---------------------------------------------------------------------------
// Controlled embeddings. The control is the leading tensor factor.

inline constexpr double kUnitarityTolerance = 1e-8;

template <typename Derived>
auto ctrl(const Eigen::MatrixBase<Derived>& u)
    -> Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (u.rows() != u.cols() || unitarity_defect(u) > kUnitarityTolerance)
    throw InvalidArgument("ctrl: operand is not unitary");
  const Index d = u.rows();
  Mat out = Mat::Zero(2 * d, 2 * d);
  out.topLeftCorner(d, d).setIdentity();
  out.bottomRightCorner(d, d) = u;
  return out;
}

template <typename Derived>
auto ctrl0(const Eigen::MatrixBase<Derived>& u)
    -> Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (u.rows() != u.cols() || unitarity_defect(u) > kUnitarityTolerance)
    throw InvalidArgument("ctrl0: operand is not unitary");
  const Index d = u.rows();
  Mat out = Mat::Zero(2 * d, 2 * d);
  out.topLeftCorner(d, d) = u;
  out.bottomRightCorner(d, d).setIdentity();
  return out;
}

// exp(-i theta (cos(phi) X - sin(phi) Y)) on one qubit.
template <typename Real = double>
OperatorT<Real> xy_rotation(Real phi, Real theta) {
  using C = ComplexT<Real>;
  OperatorT<Real> r(2, 2);
  const Real c = std::cos(theta), s = std::sin(theta);
  r(0, 0) = c;
  r(1, 1) = c;
  r(0, 1) = C(0, -1) * s * std::polar(Real(1), phi);
  r(1, 0) = C(0, -1) * s * std::polar(Real(1), -phi);
  return r;
}

// exp(-i a Z) on one qubit.
template <typename Real = double>
OperatorT<Real> z_rotation(Real a) {
  OperatorT<Real> r = OperatorT<Real>::Zero(2, 2);
  r(0, 0) = std::polar(Real(1), -a);
  r(1, 1) = std::polar(Real(1), a);
  return r;
}

// ---------------------------------------------------------------------------
// Hamiltonians

template <typename Real = double>
class HamiltonianT {
 public:
  HamiltonianT() = default;

  explicit HamiltonianT(const OperatorT<Real>& matrix, Real tol = Real(1e-10)) : matrix_(matrix) {
    if (matrix.rows() != matrix.cols()) throw InvalidArgument("Hamiltonian must be square");
    n_ = qubit_count(matrix.rows());
    if (!is_hermitian(matrix, tol)) throw InvalidArgument("Hamiltonian is not Hermitian");
    matrix_ = Real(0.5) * (matrix + matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<OperatorT<Real>> es(matrix_);
    if (es.info() != Eigen::Success) throw NumericalError("Hamiltonian eigensolver failed");
    eigenvalues_ = es.eigenvalues();
    eigenvectors_ = es.eigenvectors();
    trace_average_ = matrix_.trace().real() / Real(matrix_.rows());
  }

  int n() const { return n_; }
  Index dim() const { return matrix_.rows(); }
  const OperatorT<Real>& matrix() const { return matrix_; }
  const RealVectorT<Real>& eigenvalues() const { return eigenvalues_; }
  const OperatorT<Real>& eigenvectors() const { return eigenvectors_; }
  Real trace_average() const { return trace_average_; }

  RealVectorT<Real> traceless_eigenvalues() const {
    return (eigenvalues_.array() - trace_average_).matrix();
  }
  OperatorT<Real> traceless() const {
    return matrix_ - trace_average_ * OperatorT<Real>::Identity(dim(), dim());
  }
  Real traceless_norm() const { return traceless_eigenvalues().cwiseAbs().maxCoeff(); }

  HamiltonianT negated() const { return HamiltonianT(OperatorT<Real>(-matrix_)); }

  // V diag(g(lambda_m - traceAverage)) V^dag for a scalar map g.
  template <typename F>
  OperatorT<Real> traceless_function(F&& g) const {
    const RealVectorT<Real> e = traceless_eigenvalues();
    Eigen::Matrix<ComplexT<Real>, Eigen::Dynamic, 1> vals(e.size());
    for (Index m = 0; m < e.size(); ++m) vals(m) = ComplexT<Real>(g(e(m)));
    return eigenvectors_ * vals.asDiagonal() * eigenvectors_.adjoint();
  }

 private:
  int n_ = 0;
  OperatorT<Real> matrix_;
  RealVectorT<Real> eigenvalues_;
  OperatorT<Real> eigenvectors_;
  Real trace_average_ = 0;
};

using Hamiltonian = HamiltonianT<double>;

// exp(-i H t); negative t gives exp(+i H |t|).
template <typename Real>
OperatorT<Real> expm_hermitian(const HamiltonianT<Real>& h, Real t) {
  const auto& e = h.eigenvalues();
  Eigen::Matrix<ComplexT<Real>, Eigen::Dynamic, 1> phases(e.size());
  for (Index m = 0; m < e.size(); ++m) phases(m) = std::polar(Real(1), -e(m) * t);
  return h.eigenvectors() * phases.asDiagonal() * h.eigenvectors().adjoint();
}

// exp(-i H0 t) for the traceless part.
template <typename Real>
OperatorT<Real> expm_traceless(const HamiltonianT<Real>& h, Real t) {
  return h.traceless_function([t](Real e) { return std::polar(Real(1), -e * t); });
}

inline constexpr double kSpectrumSlack = 1e-9;

// f(H0) for f defined on [-1, 1].
template <typename Real, typename F>
OperatorT<Real> apply_spectral_function(const HamiltonianT<Real>& h, F&& f) {
  const RealVectorT<Real> e = h.traceless_eigenvalues();
  if (e.size() > 0 && e.cwiseAbs().maxCoeff() > 1 + kSpectrumSlack)
    throw InvalidArgument("apply_spectral_function: traceless spectrum leaves [-1, 1]");
  return h.traceless_function([&f](Real x) { return f(std::clamp(x, Real(-1), Real(1))); });
}

// exp(-i f(H0) t) |psi>.
template <typename Real, typename F>
StateT<Real> transformed_evolution(const HamiltonianT<Real>& h, F&& f, Real t,
                                   const StateT<Real>& psi) {
  const RealVectorT<Real> e = h.traceless_eigenvalues();
  if (e.size() > 0 && e.cwiseAbs().maxCoeff() > 1 + kSpectrumSlack)
    throw InvalidArgument("transformed_evolution: traceless spectrum leaves [-1, 1]");
  OperatorT<Real> u = h.traceless_function([&](Real x) {
    return std::polar(Real(1), -f(std::clamp(x, Real(-1), Real(1))) * t);
  });
  return u * psi;
}

// ---------------------------------------------------------------------------
// Fixtures

class Stream;

// Hermitian H with ||H0||_op = 1 and a nonzero trace component.
Hamiltonian random_hamiltonian(int n, std::uint64_t seed);

State haar_random_state(Index dim, Stream& rng);
State basis_state(Index dim, Index index);
State plus_state();

}  // namespace eigenforge
