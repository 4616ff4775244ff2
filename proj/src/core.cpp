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

#include "eigenforge/core.hpp"

#include "eigenforge/rng.hpp"

namespace eigenforge {

PauliWord pauli_word_from_index(int n, std::uint64_t index) {
  if (n < 1 || n > 31) throw InvalidArgument("pauli_word_from_index: bad qubit count");
  PauliWord w;
  w.indices.assign(static_cast<std::size_t>(n), 0);
  for (int q = n - 1; q >= 0; --q) {
    w.indices[static_cast<std::size_t>(q)] = static_cast<std::uint8_t>(index & 3U);
    index >>= 2U;
  }
  if (index != 0) throw InvalidArgument("pauli_word_from_index: index out of range");
  return w;
}

std::uint64_t pauli_word_index(const PauliWord& word) {
  std::uint64_t index = 0;
  for (auto v : word.indices) {
    if (v > 3) throw InvalidArgument("Pauli index must lie in {0,1,2,3}");
    index = (index << 2U) | v;
  }
  return index;
}

std::string to_string(const PauliWord& word) {
  static const char kLetters[] = "IXYZ";
  std::string s;
  for (auto v : word.indices) s.push_back(v < 4 ? kLetters[v] : '?');
  return s;
}

Hamiltonian random_hamiltonian(int n, std::uint64_t seed) {
  if (n < 1 || n > 6) throw InvalidArgument("random_hamiltonian: n must lie in [1, 6]");
  Stream rng = Stream::derive(seed, 0x4841);  // "HA"
  const Index d = Index{1} << n;
  Operator a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = Complex(rng.normal(), rng.normal());
  Operator h = 0.5 * (a + a.adjoint());
  const Complex shift = h.trace() / static_cast<double>(d);
  h -= shift * Operator::Identity(d, d);
  Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
  const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  if (norm <= 0) throw NumericalError("random_hamiltonian: degenerate draw");
  h /= norm;
  const double offset = 2.0 * rng.uniform() - 1.0;
  h += offset * Operator::Identity(d, d);
  return Hamiltonian(h);
}

State haar_random_state(Index dim, Stream& rng) {
  State psi(dim);
  for (Index i = 0; i < dim; ++i) psi(i) = Complex(rng.normal(), rng.normal());
  return psi / psi.norm();
}

State basis_state(Index dim, Index index) {
  if (index < 0 || index >= dim) throw InvalidArgument("basis_state: index out of range");
  State psi = State::Zero(dim);
  psi(index) = 1;
  return psi;
}

State plus_state() {
  State psi(2);
  psi << Complex(1.0 / std::sqrt(2.0)), Complex(1.0 / std::sqrt(2.0));
  return psi;
}

}  // namespace eigenforge
