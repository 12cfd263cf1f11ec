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


// Command-line driver: run, analyze, solve and crossplay.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cole/analysis.h"
#include "cole/config.h"
#include "cole/csv_io.h"
#include "cole/engine.h"
#include "cole/errors.h"
#include "cole/solvers.h"

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string flag = "sv";
  int k = 3;
  std::string run_dir;
  std::string payoff;
  std::string population;
  std::string probes;
  bool resume = false;
};

cole::EngineConfig LoadConfig(const Options& opt) {
  cole::ConfigMap values = cole::ReadConfigFile(opt.config);
  if (opt.seed) values["engine.seed"] = std::to_string(*opt.seed);
  return cole::ConfigFromMap(values);
}

int CmdRun(const Options& opt) {
  if (opt.resume) {
    cole::ResumeRun(opt.out, &std::cerr);
    return kOk;
  }
  cole::EngineConfig config = LoadConfig(opt);
  std::optional<std::filesystem::path> dir;
  if (!opt.out.empty()) dir = opt.out;
  cole::GenerationTrace trace = cole::Run(config, dir, &std::cerr);
  int satisfied = 0;
  for (const auto& r : trace.records) satisfied += r.rank_satisfied ? 1 : 0;
  std::cout << "generations " << trace.records.size() << ", rank satisfied "
            << satisfied << "\n";
  return kOk;
}

int CmdAnalyze(const Options& opt) {
  std::filesystem::path out = opt.out.empty()
                                  ? std::filesystem::path(opt.run_dir) / "analysis"
                                  : std::filesystem::path(opt.out);
  cole::AnalysisSummary summary =
      cole::AnalyzeRun(opt.run_dir, out, opt.k, &std::cerr);
  std::cout << "verdict " << cole::FormatReal(summary.verdict) << " over "
            << summary.generations << " generations, skipped "
            << summary.skipped << "\n";
  return summary.ok ? kOk : kRuntime;
}

int CmdSolve(const Options& opt) {
  cole::SolverFlag flag = cole::ParseSolverFlag(opt.flag);
  cole::PayoffMatrix payoff =
      cole::PayoffFromCsv(cole::ReadTextFile(opt.payoff));
  if (payoff.size() < 2) {
    throw cole::InvalidInput("payoff matrix needs at least two strategies");
  }
  cole::Rng rng(cole::DeriveSeed(opt.seed.value_or(0), {0x736f6c7665ULL}));
  cole::SolverResult result = cole::Solve(flag, payoff, rng);
  std::string csv = cole::SolverTableToCsv(cole::SolverTable(result, flag));
  if (opt.out.empty()) {
    std::cout << csv;
  } else {
    cole::WriteTextFile(opt.out, csv);
  }
  return kOk;
}

int CmdCrossPlay(const Options& opt) {
  cole::EngineConfig config = LoadConfig(opt);
  cole::StageGame game = config.env.Build();
  std::vector<cole::Strategy> population =
      cole::PopulationFromCsv(cole::ReadTextFile(opt.population));
  std::vector<cole::Strategy> probes =
      opt.probes == "stubborn"
          ? cole::StubbornProbes(game)
          : cole::PopulationFromCsv(cole::ReadTextFile(opt.probes));
  cole::CrossPlayReport report = cole::CrossPlay(population, probes, game);
  std::string csv = cole::CrossPlayToCsv(report);
  if (opt.out.empty()) {
    std::cout << csv;
  } else {
    cole::WriteTextFile(opt.out, csv);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Cooperative open-ended learning on convention games"};
  app.footer(cole::ConfigHelp());
  app.require_subcommand(1);

  auto seed_opt = [&](CLI::App* sub) {
    return sub->add_option("--seed", opt.seed, "Override engine.seed");
  };

  CLI::App* run = app.add_subcommand("run", "Run an experiment");
  run->add_option("--config", opt.config, "Config file")
      ->check(CLI::ExistingFile);
  seed_opt(run);
  run->add_option("--out", opt.out, "Run directory");
  run->add_flag("--resume", opt.resume, "Continue the run in --out");

  CLI::App* analyze = app.add_subcommand("analyze", "Analyze a run directory");
  analyze->add_option("run_dir", opt.run_dir, "Run directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  analyze->add_option("--out", opt.out, "Report directory (default run_dir/analysis)");
  analyze->add_option("--k", opt.k, "Rank threshold")->check(CLI::PositiveNumber);

  CLI::App* solve = app.add_subcommand("solve", "Solve a payoff CSV");
  solve->add_option("payoff", opt.payoff, "Payoff CSV")
      ->required()
      ->check(CLI::ExistingFile);
  solve->add_option("--flag", opt.flag, "Solver: sv or r")
      ->check(CLI::IsMember({"sv", "r"}));
  seed_opt(solve);
  solve->add_option("--out", opt.out, "Output CSV (default stdout)");

  CLI::App* cross = app.add_subcommand("crossplay", "Cross-play against probes");
  cross->add_option("population", opt.population, "Population CSV")
      ->required()
      ->check(CLI::ExistingFile);
  cross->add_option("probes", opt.probes,
                    "Probe population CSV, or 'stubborn' for pure conventions")
      ->required();
  cross->add_option("--config", opt.config, "Config file for the env keys")
      ->required()
      ->check(CLI::ExistingFile);
  cross->add_option("--out", opt.out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (run->parsed()) {
      if (opt.config.empty() && !opt.resume) {
        std::cerr << "run: --config is required\n";
        return kUsage;
      }
      if (opt.resume && opt.out.empty()) {
        std::cerr << "run: --resume needs --out\n";
        return kUsage;
      }
      return CmdRun(opt);
    }
    if (analyze->parsed()) return CmdAnalyze(opt);
    if (solve->parsed()) return CmdSolve(opt);
    if (cross->parsed()) return CmdCrossPlay(opt);
  } catch (const cole::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const cole::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
