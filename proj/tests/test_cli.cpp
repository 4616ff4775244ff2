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

#include <doctest.h>

#include <cstdlib>
#include <unistd.h>
#include <fstream>
#include <sstream>

using namespace eigenforge;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("eigenforge-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Result {
  int code;
  std::string out;
  std::string log;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "eigenforge");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, log;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, log);
  return {code, out.str(), log.str()};
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// The two runs differ only in timestamp and output directory.
Json without_timestamp(const fs::path& p) {
  Json j = Json::parse(slurp(p));
  j.erase("generatedAt");
  j["params"].erase("outputDir");
  return j;
}

}  // namespace

TEST_CASE("config validation names the offending field") {
  ::unsetenv("EIGENFORGE_CACHE_DIR");
  TempDir d("cfg");
  write(d.path / "missing.json", R"({"algorithm": "compiled"})");
  Result r = run_cli({"simulate", "--config", (d.path / "missing.json").string(), "--out", d.path.string()});
  CHECK(r.code == 2);
  CHECK(r.log.find("'function'") != std::string::npos);

  write(d.path / "extra.json", R"({"algorithm": "compiled", "function": "x", "colour": 1})");
  r = run_cli({"simulate", "--config", (d.path / "extra.json").string()});
  CHECK(r.code == 2);
  CHECK(r.log.find("'colour'") != std::string::npos);

  write(d.path / "type.json", R"({"algorithm": "compiled", "function": "x", "eps": "small"})");
  r = run_cli({"simulate", "--config", (d.path / "type.json").string()});
  CHECK(r.code == 2);
  CHECK(r.log.find("'eps'") != std::string::npos);

  write(d.path / "algo.json", R"({"algorithm": "magic", "function": "x"})");
  CHECK(run_cli({"simulate", "--config", (d.path / "algo.json").string()}).code == 2);
  CHECK(run_cli({"simulate", "--no-such-flag"}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"simulate", "--config", (d.path / "absent.json").string()}).code == 2);
}

TEST_CASE("config json round trip") {
  cli::ExperimentConfig c;
  c.algorithm = "qsvt";
  c.function = "x^2";
  c.epsList = {0.1, 0.2};
  c.costKnobs.compiledFactor = 3;
  const cli::ExperimentConfig back = cli::config_from_json(cli::to_json(c));
  CHECK(back.algorithm == "qsvt");
  CHECK(back.function == "x^2");
  CHECK(back.epsList == c.epsList);
  CHECK(back.costKnobs.compiledFactor == 3);
}

TEST_CASE("simulate is deterministic and reuses cached corrections") {
  ::unsetenv("EIGENFORGE_CACHE_DIR");
  TempDir d("sim");
  write(d.path / "c.json", R"({"algorithm": "compiled", "function": "x", "eps": 0.2, "trajectories": 150})");
  const std::string cfg = (d.path / "c.json").string();
  const Result a = run_cli({"simulate", "--config", cfg, "--out", (d.path / "a").string(), "--seed", "3"});
  REQUIRE(a.code == 0);
  CHECK(a.log.find("correction table computed") != std::string::npos);
  const Result again = run_cli({"simulate", "--config", cfg, "--out", (d.path / "a").string(), "--seed", "3"});
  REQUIRE(again.code == 0);
  CHECK(again.log.find("loaded from cache") != std::string::npos);
  CHECK(again.log.find("skipping pre-processing") != std::string::npos);
  const Result b = run_cli({"simulate", "--config", cfg, "--out", (d.path / "b").string(), "--seed", "3"});
  REQUIRE(b.code == 0);
  CHECK(slurp(d.path / "a" / "trajectories.jsonl") == slurp(d.path / "b" / "trajectories.jsonl"));
  CHECK(without_timestamp(d.path / "a" / "summary.json") == without_timestamp(d.path / "b" / "summary.json"));
  const Json summary = Json::parse(slurp(d.path / "a" / "summary.json"));
  CHECK(summary.at("errorEstimates").at("stateError").at("sampleCount") == 150);
  CHECK(summary.contains("generatedAt"));
  CHECK(cli::config_from_json(Json::parse(slurp(d.path / "a" / "config.json"))).seed == 3);

  const Result other = run_cli({"simulate", "--config", cfg, "--out", (d.path / "c").string(), "--seed", "4"});
  REQUIRE(other.code == 0);
  CHECK(slurp(d.path / "a" / "trajectories.jsonl") != slurp(d.path / "c" / "trajectories.jsonl"));
}

TEST_CASE("cache directory override") {
  TempDir d("cache");
  const fs::path cache = d.path / "elsewhere";
  ::setenv("EIGENFORGE_CACHE_DIR", cache.string().c_str(), 1);
  write(d.path / "c.json", R"({"algorithm": "compiled", "function": "x", "eps": 0.3})");
  const Result r = run_cli({"estimate-corrections", "--config", (d.path / "c.json").string(), "--out", d.path.string()});
  ::unsetenv("EIGENFORGE_CACHE_DIR");
  REQUIRE(r.code == 0);
  CHECK(fs::exists(d.path / "corrections.json"));
  bool found = false;
  for (const auto& e : fs::directory_iterator(cache)) found = found || e.path().filename().string().rfind("corrections-", 0) == 0;
  CHECK(found);
  CHECK_FALSE(fs::exists(d.path / "cache"));
}

TEST_CASE("every algorithm simulates") {
  ::unsetenv("EIGENFORGE_CACHE_DIR");
  TempDir d("algs");
  for (const std::string alg : {"uncompiled", "subroutine2", "qsvt", "controlization"}) {
    CAPTURE(alg);
    write(d.path / "c.json", R"({"algorithm": ")" + alg + R"(", "function": "x", "n": 2, "eps": 0.3})");
    const Result r = run_cli({"simulate", "--config", (d.path / "c.json").string(), "--out", (d.path / alg).string()});
    CHECK(r.code == 0);
    const Json s = Json::parse(slurp(d.path / alg / "summary.json"));
    CHECK(s.at("experiment") == "simulate/" + alg);
    CHECK(s.contains("queryCounts"));
  }
  const Json ctrl = Json::parse(slurp(d.path / "controlization" / "summary.json"));
  CHECK(ctrl.at("choiError").get<double>() <= 0.3);
}

TEST_CASE("scaling command") {
  TempDir d("scaling");
  write(d.path / "s.json", R"({"function": "x", "epsList": [0.3, 0.1, 0.03, 0.01]})");
  const std::string cfg = (d.path / "s.json").string();
  Result r = run_cli({"scaling", "--config", cfg, "--out", (d.path / "all").string()});
  CHECK(r.code == 0);
  const std::string csv = slurp(d.path / "all" / "scaling.csv");
  CHECK(csv.rfind("algorithm,eps,analyticCount,empiricalCount,fitSlope\n", 0) == 0);
  CHECK(csv.find("compiled,fit,") != std::string::npos);
  const Json j = Json::parse(slurp(d.path / "all" / "scaling.json"));
  CHECK(j.at("ordering").at("holds") == true);

  r = run_cli({"scaling", "--config", cfg, "--algorithm", "compiled", "--out", (d.path / "one").string()});
  CHECK(r.code == 0);
  const std::string one = slurp(d.path / "one" / "scaling.csv");
  CHECK(one.find("uncompiled") == std::string::npos);
  CHECK(one.find("qsvt") == std::string::npos);

  write(d.path / "inflated.json",
        R"({"function": "x", "epsList": [0.3, 0.1, 0.03, 0.01], "costKnobs": {"compiledFactor": 1000}})");
  r = run_cli({"scaling", "--config", (d.path / "inflated.json").string(), "--out", (d.path / "bad").string()});
  CHECK(r.code == 4);
  CHECK(r.log.find("ordering") != std::string::npos);

  r = run_cli({"scaling", "--config", cfg, "--eps-list", "0.3,0.1,0.03", "--out", (d.path / "few").string()});
  CHECK(r.code == 2);
  r = run_cli({"scaling", "--config", cfg, "--eps-list", "0.3,x", "--out", (d.path / "few").string()});
  CHECK(r.code == 2);
}

TEST_CASE("validate command") {
  Result r = run_cli({"validate"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  r = run_cli({"validate", "--mutate-phi"});
  CHECK(r.code == 1);
  CHECK(r.out.find("fourier smoothness      FAIL") != std::string::npos);
}

TEST_CASE("show-plan prints the plan") {
  TempDir d("plan");
  write(d.path / "c.json", R"({"algorithm": "compiled", "function": "x", "eps": 0.2})");
  const Result r = run_cli({"show-plan", "--config", (d.path / "c.json").string()});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j.at("graveN") == 574);
  CHECK(j.at("graveK") == 4);
}
