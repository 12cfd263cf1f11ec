// Copyright 2026 The COLE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COLE_CONFIG_H_
#define COLE_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cole/environment.h"
#include "cole/oracle.h"
#include "cole/solvers.h"

namespace cole {

struct EnvSpec {
  GameKind kind = GameKind::kTwoStage;
  std::vector<double> conventions;
  double off_payoff = 0.0;
  double noise_std = 0.0;
  int episodes = 64;

  StageGame Build() const;
};

struct EngineConfig {
  SolverFlag solver = SolverFlag::kShapley;
  int generations = 60;
  int pop_cap = 50;
  int evict_window = 10;
  std::uint64_t seed = 0;
  // 1 seeds a single uniform strategy; more seeds that many random ones.
  int initial_population = 1;
  double sucg_c = 0.5;
  SolverOptions solver_options;
  OracleConfig oracle;
  EnvSpec env;

  // Throws ConfigError naming the first invalid key.
  void Validate() const;
};

using ConfigMap = std::map<std::string, std::string>;

// Parses `key = value` lines; blank lines and `#` comments are skipped and
// surrounding double quotes are stripped from values.
ConfigMap ParseConfigText(const std::string& text);
ConfigMap ReadConfigFile(const std::string& path);

// Unknown keys and malformed values raise ConfigError. `env.conventions` is
// the only required key.
EngineConfig ConfigFromMap(const ConfigMap& values);

// Every key with its effective value; ParseConfigText + ConfigFromMap of the
// result reproduces `config`.
std::string ConfigToText(const EngineConfig& config);

// Key, default and meaning of every config key, for --help.
std::string ConfigHelp();

std::string SolverFlagName(SolverFlag flag);
SolverFlag ParseSolverFlag(const std::string& name);

}  // namespace cole

#endif  // COLE_CONFIG_H_
