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

#include <cstdint>

namespace eigenforge {

// Superoperators act on row-major vectorized operators, so that
// vec(U rho U^dag) = (U (x) conj(U)) vec(rho).

template <typename Derived>
auto vec(const Eigen::MatrixBase<Derived>& rho)
    -> Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> {
  const Index d = rho.rows();
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> v(d * rho.cols());
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < rho.cols(); ++j) v(i * rho.cols() + j) = rho(i, j);
  return v;
}

template <typename Derived>
auto unvec(const Eigen::MatrixBase<Derived>& v)
    -> Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> {
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw InvalidArgument("unvec: length is not a square");
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> rho(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) rho(i, j) = v(i * d + j);
  return rho;
}

template <typename Derived>
auto unitary_superop(const Eigen::MatrixBase<Derived>& u)
    -> Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> {
  return kron(u, u.conjugate().eval());
}

template <typename DS, typename DR>
auto apply_superop(const Eigen::MatrixBase<DS>& s, const Eigen::MatrixBase<DR>& rho)
    -> Eigen::Matrix<typename DS::Scalar, Eigen::Dynamic, Eigen::Dynamic> {
  if (s.cols() != rho.size()) throw InvalidArgument("apply_superop: dimension mismatch");
  return unvec((s * vec(rho)).eval());
}

// S^p by repeated squaring; p = 0 gives the identity map.
template <typename Derived>
auto superop_power(const Eigen::MatrixBase<Derived>& s, std::uint64_t p)
    -> Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat result = Mat::Identity(s.rows(), s.cols());
  Mat base = s;
  while (p > 0) {
    if (p & 1U) result = (result * base).eval();
    p >>= 1U;
    if (p > 0) base = (base * base).eval();
  }
  return result;
}

// Choi state (1/d) sum_ij |i><j| (x) Phi(|i><j|), unit trace for CPTP maps.
template <typename Derived>
auto choi_state(const Eigen::MatrixBase<Derived>& s)
    -> Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(s.rows()))));
  if (d * d != s.rows() || s.rows() != s.cols())
    throw InvalidArgument("choi_state: superoperator must be d^2 x d^2");
  Mat out = Mat::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      // Phi(|i><j|) is column (i*d + j) of s, unvectorized.
      Mat block = unvec(s.col(i * d + j).eval());
      out.block(i * d, j * d, d, d) = block / static_cast<typename Eigen::NumTraits<Scalar>::Real>(d);
    }
  return out;
}

struct CptpReport {
  double minEigenvalue = 0;
  double traceDefect = 0;  // max |Tr_out J - I/d|
  bool ok(double tol) const { return minEigenvalue >= -tol && traceDefect <= tol; }
};

template <typename Derived>
CptpReport cptp_report(const Eigen::MatrixBase<Derived>& s) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat j = choi_state(s);
  const Index d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(j.rows()))));
  Mat herm = (0.5 * (j + j.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(herm, Eigen::EigenvaluesOnly);
  CptpReport r;
  r.minEigenvalue = static_cast<double>(es.eigenvalues().minCoeff());
  // Tracing out the output factor must leave I/d on the input factor.
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) {
      auto tr = j.block(a * d, b * d, d, d).trace();
      const double want = (a == b) ? 1.0 / static_cast<double>(d) : 0.0;
      r.traceDefect = std::max(r.traceDefect, static_cast<double>(std::abs(tr - decltype(tr)(want))));
    }
  return r;
}

}  // namespace eigenforge
