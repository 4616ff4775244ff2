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

#include "eigenforge/io.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace eigenforge::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kValidation = 2,
  kNumerical = 3,
  kScaling = 4,
};

struct CostKnobs {
  double c0 = 4;
  double ampFactor = 9;
  double kdefFraction = 0.125;
  double compiledFactor = 1;  // multiplies compiled counts; for negative tests
};

struct ExperimentConfig {
  std::string algorithm;  // uncompiled | compiled | qsvt | controlization | subroutine2
  int n = 1;
  double t = 1;
  double eps = 0.2;
  std::string function;
  std::uint64_t seed = 1;
  std::uint64_t hamiltonianSeed = 7;
  std::uint64_t trajectories = 200;
  std::string correctionMode = "oracle";
  std::string outputDir = "out";
  std::vector<double> epsList;
  CostKnobs costKnobs;
};

// Throws InvalidArgument naming the offending field.
ExperimentConfig config_from_json(const Json& j);
Json to_json(const ExperimentConfig& c);
void validate(const ExperimentConfig& c, bool needFunction);

std::filesystem::path cache_dir(const ExperimentConfig& c);

// Each command writes diagnostics to `log` and returns an ExitCode.
int cmd_simulate(const ExperimentConfig& c, std::ostream& log);
int cmd_scaling(const ExperimentConfig& c, std::ostream& log);
int cmd_validate(std::ostream& log, bool mutatePhi = false);
int cmd_estimate_corrections(const ExperimentConfig& c, std::ostream& log);
int cmd_show_plan(const ExperimentConfig& c, std::ostream& out);

int run(int argc, char** argv, std::ostream& out, std::ostream& log);

}  // namespace eigenforge::cli
