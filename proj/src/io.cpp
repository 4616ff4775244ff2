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

#include "eigenforge/io.hpp"

#include <cstdio>
#include <cstring>

namespace eigenforge {

namespace {

Json complex_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidArgument("json: complex entry must be [re, im]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

// nlohmann's own exceptions become InvalidArgument so callers see one error type.
template <typename F>
auto guarded(const char* what, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json to_json(const State& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

Json to_json(const Operator& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

State state_from_json(const Json& j) {
  return guarded("state", [&] {
    if (!j.is_array()) throw InvalidArgument("state: expected an array");
    State v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from(j.at(i));
    return v;
  });
}

Operator operator_from_json(const Json& j) {
  return guarded("operator", [&] {
    if (!j.is_array() || j.empty()) throw InvalidArgument("operator: expected a non-empty array of rows");
    const auto rows = static_cast<Index>(j.size());
    const auto cols = static_cast<Index>(j.at(0).size());
    Operator m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      const Json& row = j.at(static_cast<std::size_t>(r));
      if (static_cast<Index>(row.size()) != cols) throw InvalidArgument("operator: ragged rows");
      for (Index c = 0; c < cols; ++c) m(r, c) = complex_from(row.at(static_cast<std::size_t>(c)));
    }
    return m;
  });
}

Json to_json(const FourierModel& m) {
  Json coeffs = Json::array();
  for (const auto& c : m.coeffs) coeffs.push_back(complex_json(c));
  return Json{{"K", m.K}, {"beta", m.beta}, {"supError", m.supError}, {"coeffs", coeffs}};
}

FourierModel fourier_model_from_json(const Json& j) {
  return guarded("fourier model", [&] {
    const int K = j.at("K").get<int>();
    const Json& cs = j.at("coeffs");
    if (K < 0 || cs.size() != static_cast<std::size_t>(2 * K + 1))
      throw InvalidArgument("fourier model: coefficient count does not match K");
    std::vector<Complex> nonNegative;
    for (int k = 0; k <= K; ++k) nonNegative.push_back(complex_from(cs.at(static_cast<std::size_t>(k + K))));
    FourierModel m = build_model(nonNegative, K);
    m.supError = j.at("supError").get<double>();
    return m;
  });
}

Json to_json(const CorrectionTable& t) {
  Json entries = Json::array();
  for (const auto& e : t.entries)
    entries.push_back({{"k", e.k},
                       {"A", e.A},
                       {"theta", e.theta},
                       {"source", e.source == CorrectionSource::kExact ? "exact" : "estimated"}});
  return Json{{"K", t.K}, {"entries", entries}};
}

CorrectionTable correction_table_from_json(const Json& j) {
  return guarded("correction table", [&] {
    CorrectionTable t;
    t.K = j.at("K").get<int>();
    const Json& es = j.at("entries");
    if (t.K < 0 || es.size() != static_cast<std::size_t>(2 * t.K + 1))
      throw InvalidArgument("correction table: entry count does not match K");
    for (std::size_t i = 0; i < es.size(); ++i) {
      const Json& e = es.at(i);
      CorrectionPair p;
      p.k = e.at("k").get<int>();
      p.A = e.at("A").get<double>();
      p.theta = e.at("theta").get<double>();
      const std::string src = e.at("source").get<std::string>();
      if (src == "exact") {
        p.source = CorrectionSource::kExact;
      } else if (src == "estimated") {
        p.source = CorrectionSource::kEstimated;
      } else {
        throw InvalidArgument("correction table: unknown source '" + src + "'");
      }
      if (p.k != static_cast<int>(i) - t.K) throw InvalidArgument("correction table: entries out of order");
      if (!(p.A > 0) || !(p.A <= 1.0 + 1e-12) || !(std::abs(p.theta) <= kPi + 1e-12))
        throw InvalidArgument("correction table: entry out of range");
      t.entries.push_back(p);
    }
    return t;
  });
}

Json to_json(const ChebyshevModel& m) {
  Json out{{"target", m.target}, {"scale", m.scale}, {"KQ", m.total()}};
  Json parts = Json::array();
  for (std::size_t s = 0; s < 2; ++s)
    parts.push_back({{"K", m.K[s]},
                     {"coeffs", m.coeffs[s]},
                     {"gridError", m.gridError[s]},
                     {"certifiedError", m.certifiedError[s]},
                     {"tailPower", m.tailPower[s]}});
  out["parts"] = parts;
  return out;
}

ChebyshevModel chebyshev_model_from_json(const Json& j) {
  return guarded("chebyshev model", [&] {
    ChebyshevModel m;
    m.target = j.at("target").get<double>();
    m.scale = j.at("scale").get<double>();
    const Json& parts = j.at("parts");
    if (parts.size() != 2) throw InvalidArgument("chebyshev model: expected two parts");
    for (std::size_t s = 0; s < 2; ++s) {
      const Json& p = parts.at(s);
      m.K[s] = p.at("K").get<int>();
      m.coeffs[s] = p.at("coeffs").get<std::vector<double>>();
      if (m.coeffs[s].size() < static_cast<std::size_t>(m.K[s] + 1))
        throw InvalidArgument("chebyshev model: coefficient count does not match K");
      m.gridError[s] = p.at("gridError").get<double>();
      m.certifiedError[s] = p.at("certifiedError").get<double>();
      m.tailPower[s] = p.at("tailPower").get<double>();
    }
    return m;
  });
}

Json to_json(const ErrorEstimate& e) {
  return Json{{"pointEstimate", e.pointEstimate},
              {"bootstrapCI", Json::array({e.lo, e.hi})},
              {"standardError", e.standardError},
              {"sampleCount", e.sampleCount},
              {"seed", e.seed}};
}

Json to_json(const ScalingFit& f) {
  Json pts = Json::array();
  for (const auto& [eps, count] : f.points) pts.push_back(Json::array({eps, count}));
  return Json{{"points", pts},
              {"slope", f.slope},
              {"slopeCI", Json::array({f.slopeLo, f.slopeHi})},
              {"r2", f.r2},
              {"spanDecades", f.spanDecades},
              {"spanOk", f.spanOk}};
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t hamiltonian_hash(const Hamiltonian& h) {
  const Operator& m = h.matrix();
  std::string bytes;
  bytes.reserve(static_cast<std::size_t>(m.size()) * 16);
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      const double parts[2] = {m(i, j).real(), m(i, j).imag()};
      bytes.append(reinterpret_cast<const char*>(parts), sizeof parts);
    }
  return fnv1a(bytes);
}

}  // namespace eigenforge
