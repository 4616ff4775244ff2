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

#include "eigenforge/compiled.hpp"
#include "eigenforge/core.hpp"
#include "eigenforge/fourier.hpp"
#include "eigenforge/metrics.hpp"
#include "eigenforge/qsvt.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace eigenforge {

using Json = nlohmann::json;

// Complex entries are [re, im] pairs; operators are row lists.
Json to_json(const State& v);
Json to_json(const Operator& m);
State state_from_json(const Json& j);
Operator operator_from_json(const Json& j);

// {K, beta, supError, coeffs: [[re, im], ...] for k = -K..K}
Json to_json(const FourierModel& m);
FourierModel fourier_model_from_json(const Json& j);

// {K, entries: [{k, A, theta, source}, ...]}
Json to_json(const CorrectionTable& t);
CorrectionTable correction_table_from_json(const Json& j);

Json to_json(const ChebyshevModel& m);
ChebyshevModel chebyshev_model_from_json(const Json& j);

Json to_json(const ErrorEstimate& e);
Json to_json(const ScalingFit& f);

// 64-bit FNV-1a, used for cache keys.
std::uint64_t fnv1a(std::string_view data);
std::string hex64(std::uint64_t v);

// Content hash of a Hamiltonian's matrix entries.
std::uint64_t hamiltonian_hash(const Hamiltonian& h);

}  // namespace eigenforge
