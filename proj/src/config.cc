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

#include "cole/config.h"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cole/errors.h"

namespace cole {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double ToDouble(const std::string& key, const std::string& text) {
  const std::string t = Trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE ||
      !std::isfinite(v)) {
    throw ConfigError(key, "expected a real number, got '" + text + "'");
  }
  return v;
}

long long ToInteger(const std::string& key, const std::string& text) {
  const std::string t = Trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  }
  return v;
}

int ToInt(const std::string& key, const std::string& text) {
  const long long v = ToInteger(key, text);
  if (v < -2147483647LL || v > 2147483647LL) {
    throw ConfigError(key, "integer out of range");
  }
  return static_cast<int>(v);
}

bool ToBool(const std::string& key, const std::string& text) {
  const std::string t = Trim(text);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw ConfigError(key, "expected true or false, got '" + text + "'");
}

std::vector<double> ToDoubleList(const std::string& key,
                                 const std::string& text) {
  std::string t = Trim(text);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') {
    throw ConfigError(key, "expected a list like [10, 8, 6], got '" + text + "'");
  }
  t = Trim(t.substr(1, t.size() - 2));
  std::vector<double> out;
  if (t.empty()) return out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ToDouble(key, item));
  return out;
}

void ParseRatio(const std::string& text, int& a, int& b) {
  const std::string t = Trim(text);
  const auto colon = t.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("oracle.ratio", "expected a:b, got '" + text + "'");
  }
  a = ToInt("oracle.ratio", t.substr(0, colon));
  b = ToInt("oracle.ratio", t.substr(colon + 1));
}

}  // namespace

StageGame EnvSpec::Build() const {
  return MakeConventionGame(conventions, off_payoff, kind, noise_std, episodes);
}

std::string SolverFlagName(SolverFlag flag) {
  return flag == SolverFlag::kShapley ? "sv" : "r";
}

SolverFlag ParseSolverFlag(const std::string& name) {
  if (name == "sv" || name == "SV") return SolverFlag::kShapley;
  if (name == "r" || name == "R") return SolverFlag::kReward;
  throw InvalidInput("unknown solver flag '" + name + "' (expected sv or r)");
}

void EngineConfig::Validate() const {
  if (generations < 0) throw ConfigError("engine.generations", "must be >= 0");
  if (pop_cap < 1) throw ConfigError("engine.pop_cap", "must be >= 1");
  if (evict_window < 1) throw ConfigError("engine.evict_window", "must be >= 1");
  if (evict_window > pop_cap) {
    throw ConfigError("engine.evict_window", "must not exceed engine.pop_cap");
  }
  if (initial_population < 1 || initial_population > pop_cap) {
    throw ConfigError("engine.initial_population",
                      "must lie in [1, engine.pop_cap]");
  }
  if (!(sucg_c >= 0.0)) throw ConfigError("sampler.c", "must be >= 0");
  if (solver_options.samples < 0) {
    throw ConfigError("solver.samples", "must be >= 0 (0 selects the default)");
  }
  if (!(solver_options.pagerank.damping > 0.0 &&
        solver_options.pagerank.damping < 1.0)) {
    throw ConfigError("solver.damping", "must lie in (0, 1)");
  }
  if (!(solver_options.pagerank.tol > 0.0)) {
    throw ConfigError("solver.tol", "must be positive");
  }
  if (solver_options.pagerank.max_iter < 1) {
    throw ConfigError("solver.max_iter", "must be >= 1");
  }
  oracle.Validate();
  if (env.conventions.empty()) {
    throw ConfigError("env.conventions", "must list at least one payoff");
  }
  try {
    env.Build();
  } catch (const InvalidInput& e) {
    throw ConfigError("env", e.what());
  }
}

ConfigMap ParseConfigText(const std::string& text) {
  ConfigMap out;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no),
                        "expected key = value");
    }
    const std::string key = Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no), "empty key");
    }
    out[key] = value;
  }
  return out;
}

ConfigMap ReadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfigText(buffer.str());
}

EngineConfig ConfigFromMap(const ConfigMap& values) {
  EngineConfig c;
  bool have_conventions = false;
  for (const auto& [key, value] : values) {
    if (key == "engine.solver") {
      try {
        c.solver = ParseSolverFlag(value);
      } catch (const InvalidInput& e) {
        throw ConfigError(key, e.what());
      }
    } else if (key == "engine.generations") {
      c.generations = ToInt(key, value);
    } else if (key == "engine.pop_cap") {
      c.pop_cap = ToInt(key, value);
    } else if (key == "engine.evict_window") {
      c.evict_window = ToInt(key, value);
    } else if (key == "engine.seed") {
      const long long s = ToInteger(key, value);
      if (s < 0) throw ConfigError(key, "must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "engine.initial_population") {
      c.initial_population = ToInt(key, value);
    } else if (key == "sampler.c") {
      c.sucg_c = ToDouble(key, value);
    } else if (key == "solver.samples") {
      c.solver_options.samples = ToInt(key, value);
    } else if (key == "solver.damping") {
      c.solver_options.pagerank.damping = ToDouble(key, value);
    } else if (key == "solver.tol") {
      c.solver_options.pagerank.tol = ToDouble(key, value);
    } else if (key == "solver.max_iter") {
      c.solver_options.pagerank.max_iter = ToInt(key, value);
    } else if (key == "oracle.alpha") {
      c.oracle.alpha = ToDouble(key, value);
    } else if (key == "oracle.ratio") {
      ParseRatio(value, c.oracle.ratio_a, c.oracle.ratio_b);
    } else if (key == "oracle.inner_updates") {
      c.oracle.inner_updates = ToInt(key, value);
    } else if (key == "oracle.step_size") {
      c.oracle.step_size = ToDouble(key, value);
    } else if (key == "oracle.k") {
      c.oracle.k = ToInt(key, value);
    } else if (key == "oracle.max_restarts") {
      c.oracle.max_restarts = ToInt(key, value);
    } else if (key == "oracle.exact_best_response") {
      c.oracle.exact_best_response = ToBool(key, value);
    } else if (key == "oracle.init") {
      c.oracle.init = ParseInitPolicy(Trim(value));
    } else if (key == "env.kind") {
      try {
        c.env.kind = ParseGameKind(Trim(value));
      } catch (const InvalidInput& e) {
        throw ConfigError(key, e.what());
      }
    } else if (key == "env.conventions") {
      c.env.conventions = ToDoubleList(key, value);
      have_conventions = true;
    } else if (key == "env.off_payoff") {
      c.env.off_payoff = ToDouble(key, value);
    } else if (key == "env.noise_std") {
      c.env.noise_std = ToDouble(key, value);
    } else if (key == "env.episodes") {
      c.env.episodes = ToInt(key, value);
    } else {
      throw ConfigError(key, "unknown config key");
    }
  }
  if (!have_conventions) {
    throw ConfigError("env.conventions", "required key is missing");
  }
  c.Validate();
  return c;
}

std::string ConfigToText(const EngineConfig& c) {
  std::ostringstream out;
  std::string conventions = "[";
  for (std::size_t i = 0; i < c.env.conventions.size(); ++i) {
    if (i) conventions += ", ";
    conventions += FormatDouble(c.env.conventions[i]);
  }
  conventions += "]";
  out << "engine.solver = \"" << SolverFlagName(c.solver) << "\"\n"
      << "engine.generations = " << c.generations << "\n"
      << "engine.pop_cap = " << c.pop_cap << "\n"
      << "engine.evict_window = " << c.evict_window << "\n"
      << "engine.seed = " << c.seed << "\n"
      << "engine.initial_population = " << c.initial_population << "\n"
      << "sampler.c = " << FormatDouble(c.sucg_c) << "\n"
      << "solver.samples = " << c.solver_options.samples << "\n"
      << "solver.damping = " << FormatDouble(c.solver_options.pagerank.damping) << "\n"
      << "solver.tol = " << FormatDouble(c.solver_options.pagerank.tol) << "\n"
      << "solver.max_iter = " << c.solver_options.pagerank.max_iter << "\n"
      << "oracle.alpha = " << FormatDouble(c.oracle.alpha) << "\n"
      << "oracle.ratio = \"" << c.oracle.ratio_a << ":" << c.oracle.ratio_b << "\"\n"
      << "oracle.inner_updates = " << c.oracle.inner_updates << "\n"
      << "oracle.step_size = " << FormatDouble(c.oracle.step_size) << "\n"
      << "oracle.k = " << c.oracle.k << "\n"
      << "oracle.max_restarts = " << c.oracle.max_restarts << "\n"
      << "oracle.exact_best_response = "
      << (c.oracle.exact_best_response ? "true" : "false") << "\n"
      << "oracle.init = \"" << InitPolicyName(c.oracle.init) << "\"\n"
      << "env.kind = \"" << GameKindName(c.env.kind) << "\"\n"
      << "env.conventions = " << conventions << "\n"
      << "env.off_payoff = " << FormatDouble(c.env.off_payoff) << "\n"
      << "env.noise_std = " << FormatDouble(c.env.noise_std) << "\n"
      << "env.episodes = " << c.env.episodes << "\n";
  return out.str();
}

std::string ConfigHelp() {
  return R"(Config keys (flat `key = value`, `#` starts a comment):
  env.conventions            required   diagonal payoffs, e.g. [10, 8, 6]
  env.kind                   two-stage  one-shot | two-stage
  env.off_payoff             0          payoff of mismatched actions
  env.noise_std              0          Gaussian episode noise (0 = exact)
  env.episodes               64         rollouts per seat order under noise
  engine.solver              sv         sv (graphic Shapley) | r (reward)
  engine.generations         60         generations to run
  engine.pop_cap             50         population cap
  engine.evict_window        10         evict uniformly among this many oldest
  engine.seed                0          master seed
  engine.initial_population  1          1 = one uniform strategy, N = N random
  sampler.c                  0.5        SUCG exploration constant
  solver.samples             0          Shapley permutations, 0 = max(1000, 200n)
  solver.damping             0.85       PageRank damping
  solver.tol                 1e-10      PageRank residual tolerance
  solver.max_iter            10000      PageRank iteration cap
  oracle.alpha               1          self-play weight
  oracle.ratio               "1:3"      self-play batches : partner draws
  oracle.inner_updates       10         ascent rounds per attempt
  oracle.step_size           0.5        projected-gradient step
  oracle.k                   3          preference-rank threshold
  oracle.max_restarts        3          perturbed retries when rank > k
  oracle.exact_best_response false      vertex best response (one-shot, no self term)
  oracle.init                fresh      fresh | previous candidate start
)";
}

}  // namespace cole
