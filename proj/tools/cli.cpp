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

#include "cli.hpp"

#include "eigenforge/compiled.hpp"
#include "eigenforge/controlization.hpp"
#include "eigenforge/qdrift.hpp"
#include "eigenforge/qsvt.hpp"
#include "eigenforge/superop.hpp"
#include "eigenforge/uncompiled.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace eigenforge::cli {

using eigenforge::to_json;

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kAlgorithms = {"uncompiled", "compiled", "qsvt", "controlization",
                                           "subroutine2"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

Json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw InvalidArgument("cannot open " + p.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(p.string() + ": " + e.what());
  }
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

void write_json(const fs::path& p, const Json& j) { write_text(p, j.dump(2) + "\n"); }

void require_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& what) {
  for (const char* k : keys)
    if (!j.contains(k)) throw std::runtime_error(what + ": missing key '" + k + "'");
}

// Summary files are re-read and checked after every write.
void check_summary(const fs::path& p) {
  const Json j = read_json(p);
  require_keys(j, {"experiment", "params", "errorEstimates", "queryCounts", "seeds"}, p.string());
  require_keys(j.at("queryCounts"), {"analytic", "empiricalMean", "empiricalCI"}, p.string());
}

Hamiltonian fixture_hamiltonian(const ExperimentConfig& c) { return random_hamiltonian(c.n, c.hamiltonianSeed); }

State fixture_state(const ExperimentConfig& c, Index dim) {
  Stream s = Stream::derive(c.seed, 0x7073);
  return haar_random_state(dim, s);
}

template <typename T>
T get_field(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidArgument(std::string("config field '") + key + "' has the wrong type");
  }
}

struct QueryStats {
  double mean = 0;
  double lo = 0;
  double hi = 0;
};

QueryStats query_stats(const std::vector<std::uint64_t>& q) {
  QueryStats s;
  if (q.empty()) return s;
  double sum = 0, sq = 0;
  for (auto v : q) {
    sum += static_cast<double>(v);
    sq += static_cast<double>(v) * static_cast<double>(v);
  }
  const double n = static_cast<double>(q.size());
  s.mean = sum / n;
  const double var = std::max(0.0, sq / n - s.mean * s.mean) * n / std::max(1.0, n - 1);
  const double half = 1.96 * std::sqrt(var / n);
  s.lo = s.mean - half;
  s.hi = s.mean + half;
  return s;
}

// Fourier models are cached by (function, target, t).
FourierModel cached_model(const ExperimentConfig& c, const PeriodicExtension& ext, double target,
                          std::ostream& log) {
  const std::string key = "fourier|" + c.function + "|" + num(target) + "|" + num(c.t);
  const fs::path p = cache_dir(c) / ("fourier-" + hex64(fnv1a(key)) + ".json");
  if (fs::exists(p)) {
    try {
      FourierModel m = fourier_model_from_json(read_json(p));
      log << "fourier model loaded from cache " << p.string() << "\n";
      return m;
    } catch (const InvalidArgument& e) {
      log << "ignoring unreadable cache entry " << p.string() << ": " << e.what() << "\n";
    }
  }
  FourierModel m = select_cutoff(ext, target);
  write_json(p, to_json(m));
  fourier_model_from_json(read_json(p));
  return m;
}

CorrectionMode correction_mode(const ExperimentConfig& c) {
  return c.correctionMode == "rpe" ? CorrectionMode::kRpe : CorrectionMode::kOracle;
}

// Correction tables are cached by (Hamiltonian, K, eps, t, mode).
CorrectionTable cached_corrections(const ExperimentConfig& c, const Hamiltonian& h, CoefficientCache& cache,
                                   int K, std::ostream& log, bool* hit = nullptr) {
  std::string key = "corrections|" + hex64(hamiltonian_hash(h)) + "|" + std::to_string(K) + "|" + num(c.eps) +
                    "|" + num(c.t) + "|" + c.correctionMode;
  if (c.correctionMode == "rpe") key += "|" + std::to_string(c.seed);
  const fs::path p = cache_dir(c) / ("corrections-" + hex64(fnv1a(key)) + ".json");
  if (hit) *hit = false;
  if (fs::exists(p)) {
    try {
      CorrectionTable t = correction_table_from_json(read_json(p));
      if (t.K == K) {
        log << "correction table loaded from cache " << p.string() << "; skipping pre-processing\n";
        if (hit) *hit = true;
        return t;
      }
    } catch (const InvalidArgument& e) {
      log << "ignoring unreadable cache entry " << p.string() << ": " << e.what() << "\n";
    }
  }
  const double budget = correction_mode(c) == CorrectionMode::kRpe ? correction_error_budget(cache, K, c.eps) : c.eps;
  Stream rng = Stream::derive(c.seed, 0xc0441);
  CorrectionTable t = estimate_corrections(h, K, budget, c.t, rng, correction_mode(c));
  write_json(p, to_json(t));
  correction_table_from_json(read_json(p));
  log << "correction table computed (" << c.correctionMode << ") and cached at " << p.string() << "\n";
  return t;
}

Json plan_json(const UncompiledPlan& p) {
  return Json{{"K", p.model.K}, {"beta", p.model.beta}, {"NF", p.NF}, {"innerBudget", p.innerBudget},
              {"supError", p.model.supError}};
}

Json plan_json(const CompiledPlan& p) {
  return Json{{"graveK", p.K()}, {"beta", p.model.beta}, {"graveBeta", p.graveBeta}, {"graveN", p.graveN},
              {"supError", p.model.supError}};
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  static const std::set<std::string> known = {"algorithm", "n", "t", "eps", "function", "seed",
                                              "hamiltonianSeed", "trajectories", "correctionMode",
                                              "outputDir", "epsList", "costKnobs"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw InvalidArgument("config field '" + k + "' is not recognized");
  ExperimentConfig c;
  c.algorithm = get_field<std::string>(j, "algorithm", c.algorithm);
  c.n = get_field<int>(j, "n", c.n);
  c.t = get_field<double>(j, "t", c.t);
  c.eps = get_field<double>(j, "eps", c.eps);
  c.function = get_field<std::string>(j, "function", c.function);
  c.seed = get_field<std::uint64_t>(j, "seed", c.seed);
  c.hamiltonianSeed = get_field<std::uint64_t>(j, "hamiltonianSeed", c.hamiltonianSeed);
  c.trajectories = get_field<std::uint64_t>(j, "trajectories", c.trajectories);
  c.correctionMode = get_field<std::string>(j, "correctionMode", c.correctionMode);
  c.outputDir = get_field<std::string>(j, "outputDir", c.outputDir);
  c.epsList = get_field<std::vector<double>>(j, "epsList", c.epsList);
  if (j.contains("costKnobs")) {
    const Json& k = j.at("costKnobs");
    if (!k.is_object()) throw InvalidArgument("config field 'costKnobs' must be an object");
    for (const auto& [key, v] : k.items())
      if (key != "c0" && key != "ampFactor" && key != "kdefFraction" && key != "compiledFactor")
        throw InvalidArgument("config field 'costKnobs." + key + "' is not recognized");
    c.costKnobs.c0 = get_field<double>(k, "c0", c.costKnobs.c0);
    c.costKnobs.ampFactor = get_field<double>(k, "ampFactor", c.costKnobs.ampFactor);
    c.costKnobs.kdefFraction = get_field<double>(k, "kdefFraction", c.costKnobs.kdefFraction);
    c.costKnobs.compiledFactor = get_field<double>(k, "compiledFactor", c.costKnobs.compiledFactor);
  }
  return c;
}

Json to_json(const ExperimentConfig& c) {
  return Json{{"algorithm", c.algorithm},
              {"n", c.n},
              {"t", c.t},
              {"eps", c.eps},
              {"function", c.function},
              {"seed", c.seed},
              {"hamiltonianSeed", c.hamiltonianSeed},
              {"trajectories", c.trajectories},
              {"correctionMode", c.correctionMode},
              {"outputDir", c.outputDir},
              {"epsList", c.epsList},
              {"costKnobs",
               {{"c0", c.costKnobs.c0},
                {"ampFactor", c.costKnobs.ampFactor},
                {"kdefFraction", c.costKnobs.kdefFraction},
                {"compiledFactor", c.costKnobs.compiledFactor}}}};
}

void validate(const ExperimentConfig& c, bool needFunction) {
  if (c.algorithm.empty()) throw InvalidArgument("config field 'algorithm' is missing");
  if (!kAlgorithms.count(c.algorithm)) throw InvalidArgument("config field 'algorithm' has unknown value '" + c.algorithm + "'");
  if (c.n < 1 || c.n > 4) throw InvalidArgument("config field 'n' must lie in 1..4");
  if (!(c.t > 0)) throw InvalidArgument("config field 't' must be positive");
  if (!(c.eps > 0) || !(c.eps < 2)) throw InvalidArgument("config field 'eps' must lie in (0, 2)");
  if (c.trajectories == 0) throw InvalidArgument("config field 'trajectories' must be positive");
  if (c.correctionMode != "oracle" && c.correctionMode != "rpe")
    throw InvalidArgument("config field 'correctionMode' must be oracle or rpe");
  if (c.outputDir.empty()) throw InvalidArgument("config field 'outputDir' is missing");
  const auto& k = c.costKnobs;
  if (!(k.c0 > 0) || !(k.ampFactor > 0) || !(k.kdefFraction > 0) || !(k.compiledFactor > 0))
    throw InvalidArgument("config field 'costKnobs' entries must be positive");
  for (double e : c.epsList)
    if (!(e > 0)) throw InvalidArgument("config field 'epsList' entries must be positive");
  if (needFunction && c.algorithm != "controlization") {
    if (c.function.empty()) throw InvalidArgument("config field 'function' is missing");
    try {
      make_target_function(c.function);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(std::string("config field 'function': ") + e.what());
    }
  }
}

fs::path cache_dir(const ExperimentConfig& c) {
  if (const char* env = std::getenv("EIGENFORGE_CACHE_DIR"); env && *env) return fs::path(env);
  return fs::path(c.outputDir) / "cache";
}

int cmd_simulate(const ExperimentConfig& c, std::ostream& log) {
  validate(c, true);
  if (c.algorithm != "qsvt" && c.trajectories < kMinTrajectories)
    throw InvalidArgument("config field 'trajectories' must be at least 100");
  const fs::path outDir(c.outputDir);
  fs::create_directories(outDir);
  const Hamiltonian h = fixture_hamiltonian(c);
  const State psi = fixture_state(c, h.dim());

  Json summary;
  summary["experiment"] = "simulate/" + c.algorithm;
  summary["params"] = to_json(c);
  summary["seeds"] = {{"trajectories", c.seed}, {"bootstrap", c.seed}, {"hamiltonian", c.hamiltonianSeed}};

  State target;
  TrajectoryBatch batch;
  double analytic = 0;
  Json plan;

  if (c.algorithm == "controlization") {
    const ControlizationPlan p = make_controlization_plan(c.n, c.t, c.eps);
    const Operator ideal = std::polar(1.0, -h.trace_average() * c.t) * ctrl0(expm_traceless(h, c.t));
    const State start = plus_tensor(psi);
    target = ideal * start;
    for (std::uint64_t w = 0; w < c.trajectories; ++w) {
      Stream s = trajectory_stream(c.seed, w);
      const TrajectoryRecord r = controlize_trajectory(p, h, s);
      batch.states.push_back(r.unitary * start);
      batch.queries.push_back(r.queryCount);
      batch.streamKeys.push_back(r.streamKey);
      batch.ks.emplace_back();
    }
    analytic = static_cast<double>(p.N);
    plan = {{"N", p.N}};
    if (c.n <= 2) summary["choiError"] = choi_error(unitary_superop(ideal), controlization_channel(p, h));
  } else {
    const TargetFunction f = make_target_function(c.function);
    target = transformed_evolution(h, [&f](double x) { return f(x); }, c.t, psi);
    const PeriodicExtension ext(f);
    CoefficientCache coeffs(ext);
    if (c.algorithm == "subroutine2") {
      const UncompiledPlan p = plan_subroutine2(cached_model(c, ext, c.eps / (4.0 * c.t), log), c.t, c.eps);
      batch = run_subroutine2(p, h, psi, c.trajectories, c.seed);
      plan = plan_json(p);
    } else if (c.algorithm == "uncompiled") {
      const UncompiledPlan p = plan_algorithm3(cached_model(c, ext, c.eps / (8.0 * c.t), log), c.t, c.eps);
      // Sampled Q and R would need ~1e9 controlized steps per trajectory here,
      // so trajectories use exact controlled evolutions, queries are drawn
      // from the full algorithm, and the full channel is averaged exactly.
      batch = run_subroutine2(p, h, psi, c.trajectories, c.seed);
      batch.queries = sample_algorithm3_queries(p, c.trajectories, c.seed);
      if (c.n <= 3) {
        const Operator avg = partial_trace_first_qubit(algorithm3_average_state(p, h, psi));
        summary["exactChannelError"] = trace_distance(avg, density(target));
      }
      analytic = analytic_cost_uncompiled(p).expectedQueries;
      plan = plan_json(p);
    } else if (c.algorithm == "compiled") {
      const FourierModel m = cached_model(c, ext, c.eps / (6.0 * c.t), log);
      const CorrectionTable table = cached_corrections(c, h, coeffs, m.K, log);
      const CompiledPlan p = make_compiled_plan(m, table, c.t, c.eps);
      batch = run_algorithm4(p, h, psi, c.trajectories, c.seed);
      analytic = analytic_cost_compiled(p) * c.costKnobs.compiledFactor;
      plan = plan_json(p);
      plan["corrections"] = to_json(table);
    } else {  // qsvt
      const QsvtFunctionPair pair = build_function_pair(f, c.t);
      const ChebyshevModel m = chebyshev_model(pair, c.eps * c.costKnobs.kdefFraction);
      const QsvtApplyResult r = idealized_qsvt_apply(m, h, psi);
      const State out = r.output / r.output.norm();
      const double dist = trace_distance(density(out), density(target));
      QsvtCostKnobs knobs{c.costKnobs.c0, c.costKnobs.ampFactor, kPi / 6.0, c.costKnobs.kdefFraction};
      analytic = cost_model_qsvt(std::max(1, m.total()), c.eps, knobs);
      summary["plan"] = {{"KQ", m.total()}, {"chebyshev", to_json(m)}};
      summary["errorEstimates"] = {{"stateError", {{"pointEstimate", dist}, {"sampleCount", 1}}},
                                   {"blockDistance", (r.output - target).norm()},
                                   {"errorBound", r.errorBound}};
      summary["queryCounts"] = {{"analytic", analytic}, {"empiricalMean", analytic},
                                {"empiricalCI", Json::array({analytic, analytic})}};
      Json line{{"index", 0}, {"queries", analytic}, {"distance", dist}, {"state", to_json(out)}};
      write_text(outDir / "trajectories.jsonl", line.dump() + "\n");
      summary["generatedAt"] = timestamp();
      write_json(outDir / "summary.json", summary);
      write_json(outDir / "config.json", to_json(c));
      check_summary(outDir / "summary.json");
      log << "qsvt: KQ=" << m.total() << " distance=" << num(dist) << " bound=" << num(r.errorBound) << "\n";
      return kOk;
    }
  }

  const ErrorEstimate se = state_error(target, batch.states, c.seed);
  const ErrorEstimate ms = mean_square_error(target, batch.states, c.seed);
  const QueryStats qs = query_stats(batch.queries);
  std::ostringstream lines;
  const Operator proj = density(target);
  const auto rhos = reduced_states(target, batch.states);
  for (std::size_t w = 0; w < batch.states.size(); ++w) {
    Json line{{"index", w},
              {"streamKey", hex64(batch.streamKeys[w])},
              {"queries", batch.queries[w]},
              {"steps", batch.ks[w].size()},
              {"distance", trace_distance(rhos[w], proj)},
              {"state", to_json(batch.states[w])}};
    lines << line.dump() << "\n";
  }
  write_text(outDir / "trajectories.jsonl", lines.str());
  summary["plan"] = plan;
  summary["errorEstimates"] = {{"stateError", to_json(se)}, {"meanSquare", to_json(ms)}};
  summary["queryCounts"] = {{"analytic", analytic}, {"empiricalMean", qs.mean},
                            {"empiricalCI", Json::array({qs.lo, qs.hi})}};
  summary["generatedAt"] = timestamp();
  write_json(outDir / "summary.json", summary);
  write_json(outDir / "config.json", to_json(c));
  check_summary(outDir / "summary.json");
  if (config_from_json(read_json(outDir / "config.json")).seed != c.seed)
    throw std::runtime_error("config.json did not round-trip");
  log << c.algorithm << ": stateError=" << num(se.pointEstimate) << " meanSquare=" << num(ms.pointEstimate)
      << " queries=" << num(qs.mean) << "\n";
  return kOk;
}

int cmd_scaling(const ExperimentConfig& cIn, std::ostream& log) {
  ExperimentConfig c = cIn;
  if (c.algorithm.empty()) c.algorithm = "all";
  std::vector<std::string> algs;
  if (c.algorithm == "all") {
    algs = {"uncompiled", "compiled", "qsvt"};
  } else if (c.algorithm == "uncompiled" || c.algorithm == "compiled" || c.algorithm == "qsvt") {
    algs = {c.algorithm};
  } else {
    throw InvalidArgument("config field 'algorithm' must be uncompiled, compiled, qsvt or all for scaling");
  }
  ExperimentConfig checked = c;
  checked.algorithm = algs.front();
  validate(checked, true);
  if (c.epsList.size() < 4) throw InvalidArgument("config field 'epsList' needs at least 4 values");

  const Hamiltonian h = fixture_hamiltonian(c);
  const TargetFunction f = make_target_function(c.function);
  const PeriodicExtension ext(f);
  CoefficientCache coeffs(ext);
  const QsvtCostKnobs knobs{c.costKnobs.c0, c.costKnobs.ampFactor, kPi / 6.0, c.costKnobs.kdefFraction};
  const std::uint64_t samples = std::min<std::uint64_t>(c.trajectories, 200);

  struct Window {
    double lo, hi;
  };
  const std::map<std::string, Window> windows = {
      {"uncompiled", {-3.3, -2.7}}, {"compiled", {-1.3, -0.7}}, {"qsvt", {-5.0 / 3.0 - 0.3, -5.0 / 3.0 + 0.3}}};

  std::ostringstream csv;
  csv << "algorithm,eps,analyticCount,empiricalCount,fitSlope\n";
  Json report;
  report["experiment"] = "scaling";
  report["params"] = to_json(c);
  report["seeds"] = {{"sampling", c.seed}, {"bootstrap", c.seed}, {"hamiltonian", c.hamiltonianSeed}};
  bool ok = true;
  std::map<std::string, double> atSmallest;
  const double smallest = *std::min_element(c.epsList.begin(), c.epsList.end());
  for (const auto& alg : algs) {
    std::vector<std::pair<double, double>> points;
    Json rows = Json::array();
    std::vector<std::pair<double, double>> kq;
    for (double eps : c.epsList) {
      double analytic = 0, empirical = 0;
      if (alg == "uncompiled") {
        const UncompiledPlan p = plan_algorithm3(coeffs, c.t, eps);
        analytic = analytic_cost_uncompiled(p).expectedQueries;
        empirical = query_stats(sample_algorithm3_queries(p, samples, c.seed)).mean;
      } else if (alg == "compiled") {
        const FourierModel m = compiled_cutoff(coeffs, c.t, eps);
        const CompiledPlan p = make_compiled_plan(m, exact_correction_table(h, m.K), c.t, eps);
        analytic = analytic_cost_compiled(p) * c.costKnobs.compiledFactor;
        empirical = query_stats(sample_algorithm4_queries(p, samples, c.seed)).mean * c.costKnobs.compiledFactor;
      } else {
        const QsvtCost q = analytic_cost_qsvt(f, c.t, eps, knobs);
        analytic = q.queries;
        empirical = q.queries;
        kq.emplace_back(eps, static_cast<double>(q.KQ));
      }
      points.emplace_back(eps, analytic);
      if (eps == smallest) atSmallest[alg] = analytic;
      csv << alg << "," << num(eps) << "," << num(analytic) << "," << num(empirical) << ",\n";
      rows.push_back({{"eps", eps}, {"analyticCount", analytic}, {"empiricalCount", empirical}});
    }
    const ScalingFit fit = fit_scaling(points, c.seed);
    csv << alg << ",fit,,," << num(fit.slope) << "\n";
    Json entry{{"rows", rows}, {"fit", to_json(fit)}};
    const Window w = windows.at(alg);
    const bool inWindow = fit.slope >= w.lo && fit.slope <= w.hi;
    entry["window"] = Json::array({w.lo, w.hi});
    entry["inWindow"] = inWindow;
    if (!kq.empty()) {
      const ScalingFit kfit = fit_scaling(kq, c.seed);
      entry["KQfit"] = to_json(kfit);
      if (kfit.slope < -1.0 / 3.0 - 0.1 || kfit.slope > -1.0 / 3.0 + 0.1) {
        log << "qsvt: KQ slope " << num(kfit.slope) << " outside -1/3 +- 0.1\n";
        ok = false;
      }
    }
    report["algorithms"][alg] = entry;
    log << alg << ": slope=" << num(fit.slope) << " r2=" << num(fit.r2)
        << " span=" << num(fit.spanDecades) << (fit.spanOk ? "" : " (span below 1.5 decades)") << "\n";
    if (!fit.accepted()) {
      log << alg << ": r2 below 0.95\n";
      ok = false;
    }
    if (!inWindow) {
      log << alg << ": slope outside [" << num(w.lo) << ", " << num(w.hi) << "]\n";
      ok = false;
    }
  }
  if (algs.size() == 3) {
    const bool ordered = atSmallest["compiled"] <= atSmallest["qsvt"] && atSmallest["qsvt"] <= atSmallest["uncompiled"];
    report["ordering"] = {{"eps", smallest}, {"holds", ordered}};
    if (!ordered) {
      log << "ordering compiled <= qsvt <= uncompiled fails at eps=" << num(smallest) << "\n";
      ok = false;
    }
  }
  const fs::path outDir(c.outputDir);
  write_text(outDir / "scaling.csv", csv.str());
  report["generatedAt"] = timestamp();
  write_json(outDir / "scaling.json", report);
  require_keys(read_json(outDir / "scaling.json"), {"experiment", "params", "algorithms", "seeds"}, "scaling.json");
  return ok ? kOk : kScaling;
}

int cmd_validate(std::ostream& log, bool mutatePhi) {
  struct Row {
    std::string family;
    bool pass;
    std::string detail;
  };
  std::vector<Row> rows;
  auto add = [&rows](std::string family, bool pass, std::string detail) {
    rows.push_back({std::move(family), pass, std::move(detail)});
  };

  {
    double worst = 0;
    for (int n = 1; n <= 3; ++n)
      for (std::uint64_t s = 0; s < 10; ++s) {
        const Hamiltonian h = random_hamiltonian(n, 1000 + s);
        worst = std::max(worst, operator_norm(pauli_twirl(h) - h.trace_average() * identity(h.dim())));
      }
    add("twirl identity", worst <= 1e-10, "max deviation " + num(worst));
  }
  {
    bool pass = true;
    for (double lambda : {0.5, 1.0, 2.0})
      for (double t : {0.5, 1.0, 2.0})
        for (double eps : {0.5, 0.2, 0.1, 0.05})
          pass = pass && qdrift_error_bound(lambda, t, iteration_count(lambda, t, eps)) < eps;
    add("qdrift bound", pass, "36 grid points");
  }
  {
    double worst = 0;
    const Hamiltonian h1 = random_hamiltonian(1, 11), h2 = random_hamiltonian(2, 12);
    worst = std::max({verify_lemma_d1(h1, 1, 2, 0.4), verify_lemma_d1(h1, 2, 2, 0.4), verify_lemma_d1(h1, 1, 3, 0.4),
                      verify_lemma_d1(h2, 1, 2, 0.4)});
    add("lemma D1 enumeration", worst <= 1e-9, "max deviation " + num(worst));
  }
  {
    bool pass = true;
    for (int n = 1; n <= 3; ++n)
      for (std::uint64_t s = 0; s < 10; ++s) {
        const Hamiltonian h = random_hamiltonian(n, 2000 + s);
        for (int k = 1; k <= 6; ++k) {
          const CorrectionPair c = correction_exact(h, k, compiled_inner_steps(k));
          pass = pass && c.A >= 1.0 - kPi * kPi / 80.0 - 1e-12 && c.A <= 1.0 + 1e-12 &&
                 std::abs(c.theta) <= std::pow(kPi, 3) / (3200.0 * k) + 1e-12;
        }
      }
    add("correction bounds", pass, "k = 1..6, n <= 3");
  }
  {
    SmoothingMatrix phi = smoothing_matrix();
    if (mutatePhi) phi(0, 0) += 1e-3;
    double worst = 0;
    for (const auto& name : builtin_function_names())
      worst = std::max(worst, seam_report(PeriodicExtension(make_target_function(name), phi)).max());
    add("fourier smoothness", worst <= 1e-6, "max seam mismatch " + num(worst));
  }
  {
    double worst = 0, defect = 0;
    for (int n = 1; n <= 2; ++n) {
      const Hamiltonian h = random_hamiltonian(n, 3000 + n);
      for (int s = 0; s < 2; ++s) {
        const Operator b = b_s_operator(h, s);
        worst = std::max(worst, operator_norm(b - b_s_operator_factored(h, s)));
        defect = std::max(defect, unitarity_defect(b));
      }
    }
    add("block encoding", worst <= 1e-9 && defect <= 1e-9, "assembly gap " + num(worst));
  }
  {
    double worst = 0;
    const TargetFunction f = make_target_function("x");
    for (double t : {0.5, 1.0}) {
      const QsvtFunctionPair pair = build_function_pair(f, t);
      for (int n = 1; n <= 2; ++n)
        for (std::uint64_t s = 0; s < 3; ++s) {
          const Hamiltonian h = random_hamiltonian(n, 4000 + 10 * n + s);
          const Operator target = expm_traceless(h, t);
          worst = std::max(worst, operator_norm(qsvt_spectral_operator(pair, h) - target));
        }
    }
    add("qsvt spectral identity", worst <= 1e-6, "max deviation " + num(worst));
  }

  bool all = true;
  log << std::left << std::setw(24) << "family" << std::setw(8) << "result" << "detail\n";
  for (const auto& r : rows) {
    log << std::left << std::setw(24) << r.family << std::setw(8) << (r.pass ? "PASS" : "FAIL") << r.detail << "\n";
    all = all && r.pass;
  }
  return all ? kOk : kFailure;
}

int cmd_estimate_corrections(const ExperimentConfig& cIn, std::ostream& log) {
  ExperimentConfig c = cIn;
  if (c.algorithm.empty()) c.algorithm = "compiled";
  validate(c, true);
  const Hamiltonian h = fixture_hamiltonian(c);
  const PeriodicExtension ext(make_target_function(c.function));
  CoefficientCache coeffs(ext);
  const FourierModel m = cached_model(c, ext, c.eps / (6.0 * c.t), log);
  const CorrectionTable table = cached_corrections(c, h, coeffs, m.K, log);
  write_json(fs::path(c.outputDir) / "corrections.json", to_json(table));
  return kOk;
}

int cmd_show_plan(const ExperimentConfig& c, std::ostream& out) {
  validate(c, true);
  Json plan{{"algorithm", c.algorithm}};
  std::ostringstream quiet;
  if (c.algorithm == "controlization") {
    const ControlizationPlan p = make_controlization_plan(c.n, c.t, c.eps);
    plan["N"] = p.N;
  } else {
    const TargetFunction f = make_target_function(c.function);
    const PeriodicExtension ext(f);
    CoefficientCache coeffs(ext);
    if (c.algorithm == "subroutine2") {
      plan.update(plan_json(plan_subroutine2(coeffs, c.t, c.eps)));
    } else if (c.algorithm == "uncompiled") {
      const UncompiledPlan p = plan_algorithm3(coeffs, c.t, c.eps);
      plan.update(plan_json(p));
      plan["analyticQueries"] = analytic_cost_uncompiled(p).expectedQueries;
    } else if (c.algorithm == "compiled") {
      const FourierModel m = compiled_cutoff(coeffs, c.t, c.eps);
      const Hamiltonian h = fixture_hamiltonian(c);
      const CompiledPlan p = make_compiled_plan(m, exact_correction_table(h, m.K), c.t, c.eps);
      plan.update(plan_json(p));
      plan["correctionBudget"] = correction_error_budget(coeffs, m.K, c.eps);
      plan["analyticQueries"] = analytic_cost_compiled(p) * c.costKnobs.compiledFactor;
    } else {
      const QsvtCostKnobs knobs{c.costKnobs.c0, c.costKnobs.ampFactor, kPi / 6.0, c.costKnobs.kdefFraction};
      const ChebyshevModel m = chebyshev_model(build_function_pair(f, c.t), c.eps * knobs.kdefFraction);
      plan["KQ"] = m.total();
      plan["K0"] = m.K[0];
      plan["K1"] = m.K[1];
      plan["scale"] = m.scale;
      plan["analyticQueries"] = cost_model_qsvt(std::max(1, m.total()), c.eps, knobs);
    }
  }
  out << plan.dump(2) << "\n";
  return kOk;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& log) {
  CLI::App app{"eigenforge: Hamiltonian eigenvalue transformation benchmarks"};
  app.require_subcommand(1);
  std::string configPath, algorithm, correctionMode, outDir, epsList;
  std::optional<std::uint64_t> seed, trajectories;
  bool mutatePhi = false;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", configPath, "experiment config (JSON)");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--trajectories", trajectories, "number of trajectories");
    sub->add_option("--out", outDir, "output directory");
    sub->add_option("--correction-mode", correctionMode, "oracle or rpe");
    sub->add_option("--algorithm", algorithm, "algorithm name");
    sub->add_option("--eps-list", epsList, "comma separated eps values");
  };
  CLI::App* simulate = app.add_subcommand("simulate", "run trajectories and write summary.json");
  CLI::App* scaling = app.add_subcommand("scaling", "analytic query counts and fitted slopes");
  CLI::App* validateCmd = app.add_subcommand("validate", "property checks");
  CLI::App* estimate = app.add_subcommand("estimate-corrections", "compute and cache a correction table");
  CLI::App* showPlan = app.add_subcommand("show-plan", "print the plan for a config");
  for (CLI::App* sub : {simulate, scaling, estimate, showPlan}) common(sub);
  validateCmd->add_flag("--mutate-phi", mutatePhi, "perturb the smoothing matrix (negative test)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, log);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (validateCmd->parsed()) return cmd_validate(out, mutatePhi);
    ExperimentConfig c;
    if (!configPath.empty()) c = config_from_json(read_json(configPath));
    if (seed) c.seed = *seed;
    if (trajectories) c.trajectories = *trajectories;
    if (!outDir.empty()) c.outputDir = outDir;
    if (!correctionMode.empty()) c.correctionMode = correctionMode;
    if (!algorithm.empty()) c.algorithm = algorithm;
    if (!epsList.empty()) {
      c.epsList.clear();
      std::stringstream ss(epsList);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          c.epsList.push_back(std::stod(item));
        } catch (const std::exception&) {
          throw InvalidArgument("--eps-list entry '" + item + "' is not a number");
        }
      }
    }
    if (simulate->parsed()) return cmd_simulate(c, log);
    if (scaling->parsed()) return cmd_scaling(c, log);
    if (estimate->parsed()) return cmd_estimate_corrections(c, log);
    return cmd_show_plan(c, out);
  } catch (const InvalidArgument& e) {
    log << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const NumericalError& e) {
    log << "numerical guard: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    log << "failure: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace eigenforge::cli
