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

#include "cole/engine.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "cole/csv_io.h"
#include "cole/errors.h"
#include "cole/oracle.h"
#include "cole/solvers.h"
#include "json.hpp"

namespace cole {
namespace fs = std::filesystem;
namespace {

constexpr std::uint64_t kNoiseTag = 0x6e6f697365;  // "noise"
constexpr std::uint64_t kInitTag = 0x696e6974;     // "init"

std::string GenFile(int t) { return "gen_" + std::to_string(t) + ".csv"; }

void WriteSnapshotFiles(const fs::path& dir, int t,
                        std::span<const Strategy> population,
                        const VisitCounts& visits, const PayoffMatrix& payoff,
                        GameKind kind) {
  WriteTextFile(dir / "population" / GenFile(t),
                PopulationToCsv(population, kind));
  WriteTextFile(dir / "population" / ("visits_" + std::to_string(t) + ".csv"),
                VisitsToCsv(population, visits));
  WriteTextFile(dir / "payoff" / GenFile(t), PayoffToCsv(payoff));
}

void WriteCheckpoint(const fs::path& dir, const Engine& engine) {
  std::ostringstream out;
  out << "generation=" << engine.generation() << "\n"
      << "next_id=" << engine.next_id() << "\n"
      << "rng=" << engine.rng() << "\n";
  WriteTextFile(dir / "checkpoint.meta", out.str());
}

void AppendLine(const fs::path& path, const std::string& line) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot append to " + path.string());
  out << line << '\n';
  out.flush();
}

std::vector<StrategyId> Ids(std::span<const Strategy> population) {
  std::vector<StrategyId> ids;
  for (const auto& s : population) ids.push_back(s.id);
  return ids;
}

}  // namespace

std::optional<StrategyId> EvictIfFull(std::vector<Strategy>& population,
                                      VisitCounts& visits, PairCache& cache,
                                      int cap, int window, Rng& rng) {
  if (static_cast<int>(population.size()) <= cap) return std::nullopt;
  if (window < 1) throw InvalidInput("eviction window must be >= 1");
  std::vector<int> order(population.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (population[a].birth_generation != population[b].birth_generation) {
      return population[a].birth_generation < population[b].birth_generation;
    }
    return population[a].id < population[b].id;
  });
  const int span = std::min<int>(window, static_cast<int>(population.size()));
  const int victim = order[static_cast<int>(UniformUnit(rng) * span)];
  const StrategyId id = population[victim].id;
  population.erase(population.begin() + victim);
  if (visits.counts.size() > static_cast<std::size_t>(victim)) {
    visits.counts.erase(visits.counts.begin() + victim);
  }
  cache.Erase(id);
  return id;
}

Engine::Engine(EngineConfig config)
    : config_(std::move(config)), game_(config_.env.Build()) {
  config_.Validate();
  rng_.seed(config_.seed);
  noise_seed_ = DeriveSeed(config_.seed, {kNoiseTag});
  const int n0 = config_.initial_population;
  if (n0 == 1) {
    population_.push_back(UniformStrategy(game_));
  } else {
    Rng init(DeriveSeed(config_.seed, {kInitTag}));
    for (int i = 0; i < n0; ++i) population_.push_back(RandomStrategy(game_, init));
  }
  for (int i = 0; i < n0; ++i) {
    population_[i].id = StrategyId{i};
    population_[i].birth_generation = 0;
  }
  next_id_ = n0;
  visits_.counts.assign(n0, 0);
}

Engine Engine::Resume(const fs::path& run_dir) {
  Engine engine(ConfigFromMap(ReadConfigFile((run_dir / "config.snapshot").string())));
  const ConfigMap meta =
      ParseConfigText(ReadTextFile(run_dir / "checkpoint.meta"));
  auto field = [&](const std::string& key) {
    auto it = meta.find(key);
    if (it == meta.end()) throw Error("checkpoint.meta lacks '" + key + "'");
    return it->second;
  };
  const int t = std::stoi(field("generation"));
  engine.generation_ = t;
  engine.next_id_ = std::stoll(field("next_id"));
  std::istringstream rng_state(field("rng"));
  rng_state >> engine.rng_;
  if (!rng_state) throw Error("checkpoint.meta has a corrupt rng state");

  engine.population_ =
      PopulationFromCsv(ReadTextFile(run_dir / "population" / GenFile(t)));
  engine.visits_ = VisitsFromCsv(
      ReadTextFile(run_dir / "population" /
                   ("visits_" + std::to_string(t) + ".csv")),
      engine.population_);
  if (t > 0) {
    const GenerationTrace trace = LoadTrace(run_dir);
    if (static_cast<int>(trace.records.size()) < t) {
      throw Error("trace.jsonl is shorter than the checkpoint");
    }
    if (const auto evicted = trace.records[t - 1].evicted_id) {
      for (std::size_t i = 0; i < engine.population_.size(); ++i) {
        if (engine.population_[i].id == *evicted) {
          engine.population_.erase(engine.population_.begin() + i);
          engine.visits_.counts.erase(engine.visits_.counts.begin() + i);
          break;
        }
      }
    }
  }
  for (const auto& s : engine.population_) CheckCompatible(s, engine.game_);
  return engine;
}

GenerationRecord Engine::RunGeneration(ExpandedPopulation* expanded) {
  if (population_.empty()) throw InvalidInput("population is empty");
  const int t = ++generation_;
  Rng solver_rng(rng_());
  Rng oracle_rng(rng_());
  Rng init_rng(rng_());
  Rng evict_rng(rng_());

  const PayoffMatrix payoff =
      CompletePayoffMatrix(population_, game_, cache_, noise_seed_);
  const SolverResult solved =
      Solve(config_.solver, payoff, solver_rng, config_.solver_options);

  const Strategy init = config_.oracle.init == InitPolicy::kFresh
                            ? RandomStrategy(game_, init_rng)
                            : population_.back();
  TrainContext context;
  context.population = population_;
  context.payoff = &payoff;
  context.phi = solved.distribution.phi;
  context.visits = &visits_;
  context.game = &game_;
  context.sucg_c = config_.sucg_c;
  context.candidate_id = StrategyId{next_id_};
  context.noise_seed = noise_seed_;
  TrainReport report = TrainOracle(init, config_.oracle, context, oracle_rng);
  if (!report.rank_satisfied && log_) {
    *log_ << "warning: generation " << t << ": oracle missed the top-"
          << config_.oracle.k << " preference rank (rank " << report.rank
          << " after " << report.attempts << " attempts); keeping the best "
          << "candidate\n";
  }

  GenerationRecord record;
  record.generation = t;
  record.new_id = StrategyId{next_id_++};
  record.eta = report.eta;
  record.rank = report.rank;
  record.rank_satisfied = report.rank_satisfied;
  record.phi = solved.distribution.phi;
  record.payoff_row = report.payoff_row;
  record.attempts = report.attempts;

  Strategy added = std::move(report.final_strategy);
  added.id = record.new_id;
  added.birth_generation = t;
  population_.push_back(std::move(added));
  visits_.counts.push_back(0);

  PayoffMatrix full =
      CompletePayoffMatrix(population_, game_, cache_, noise_seed_);
  if (expanded) {
    expanded->strategies = population_;
    expanded->visits = visits_;
    expanded->payoff = std::move(full);
  }
  record.evicted_id = EvictIfFull(population_, visits_, cache_, config_.pop_cap,
                                  config_.evict_window, evict_rng);
  return record;
}

std::string RecordToJson(const GenerationRecord& r) {
  nlohmann::ordered_json j;
  j["generation"] = r.generation;
  j["new_id"] = r.new_id.value;
  j["eta"] = r.eta;
  j["rank"] = r.rank;
  j["rank_satisfied"] = r.rank_satisfied;
  j["phi"] = r.phi;
  j["payoff_row"] = r.payoff_row;
  j["evicted_id"] = r.evicted_id ? nlohmann::ordered_json(r.evicted_id->value)
                                 : nlohmann::ordered_json(nullptr);
  j["attempts"] = r.attempts;
  return j.dump();
}

GenerationRecord RecordFromJson(const std::string& line) {
  try {
    const auto j = nlohmann::json::parse(line);
    GenerationRecord r;
    r.generation = j.at("generation").get<int>();
    r.new_id = StrategyId{j.at("new_id").get<std::int64_t>()};
    r.eta = j.at("eta").get<double>();
    r.rank = j.at("rank").get<int>();
    r.rank_satisfied = j.at("rank_satisfied").get<bool>();
    r.phi = j.at("phi").get<std::vector<double>>();
    r.payoff_row = j.at("payoff_row").get<std::vector<double>>();
    if (!j.at("evicted_id").is_null()) {
      r.evicted_id = StrategyId{j.at("evicted_id").get<std::int64_t>()};
    }
    r.attempts = j.value("attempts", 1);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad trace record: ") + e.what());
  }
}

namespace {

void StartRunDir(const fs::path& dir, const Engine& engine) {
  fs::create_directories(dir / "population");
  fs::create_directories(dir / "payoff");
  WriteTextFile(dir / "config.snapshot", ConfigToText(engine.config()));
  WriteTextFile(dir / "trace.jsonl", "");
  PairCache scratch;
  const PayoffMatrix initial =
      CompletePayoffMatrix(engine.population(), engine.game(), scratch,
                           DeriveSeed(engine.config().seed, {kNoiseTag}));
  WriteSnapshotFiles(dir, 0, engine.population(), engine.visits(), initial,
                     engine.config().env.kind);
  WriteCheckpoint(dir, engine);
}

void Advance(Engine& engine, GenerationTrace& trace,
             const std::optional<fs::path>& run_dir) {
  while (engine.generation() < engine.config().generations) {
    ExpandedPopulation expanded;
    GenerationRecord record = engine.RunGeneration(&expanded);
    if (run_dir) {
      WriteSnapshotFiles(*run_dir, record.generation, expanded.strategies,
                         expanded.visits, expanded.payoff,
                         engine.config().env.kind);
      AppendLine(*run_dir / "trace.jsonl", RecordToJson(record));
      WriteCheckpoint(*run_dir, engine);
    }
    trace.snapshots.push_back({Ids(expanded.strategies), std::move(expanded.payoff)});
    trace.records.push_back(std::move(record));
  }
}

}  // namespace

GenerationTrace Run(const EngineConfig& config,
                    const std::optional<fs::path>& run_dir, std::ostream* log) {
  Engine engine(config);
  engine.set_log(log);
  GenerationTrace trace;
  trace.config = engine.config();
  if (run_dir) StartRunDir(*run_dir, engine);
  Advance(engine, trace, run_dir);
  return trace;
}

GenerationTrace ResumeRun(const fs::path& run_dir, std::ostream* log) {
  Engine engine = Engine::Resume(run_dir);
  engine.set_log(log);
  GenerationTrace trace = LoadTrace(run_dir);
  trace.records.resize(engine.generation());
  trace.snapshots.resize(engine.generation());
  // Drop any records written after the checkpoint.
  std::string lines;
  for (const auto& r : trace.records) lines += RecordToJson(r) + "\n";
  WriteTextFile(run_dir / "trace.jsonl", lines);
  Advance(engine, trace, run_dir);
  return trace;
}

GenerationTrace LoadTrace(const fs::path& run_dir) {
  GenerationTrace trace;
  trace.config =
      ConfigFromMap(ReadConfigFile((run_dir / "config.snapshot").string()));
  std::istringstream lines(ReadTextFile(run_dir / "trace.jsonl"));
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    trace.records.push_back(RecordFromJson(line));
  }
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    if (trace.records[i].generation != static_cast<int>(i) + 1) {
      throw InvalidInput("trace.jsonl records are not contiguous from 1");
    }
  }
  for (const auto& r : trace.records) {
    PayoffSnapshot snap;
    try {
      const auto pop = PopulationFromCsv(
          ReadTextFile(run_dir / "population" / GenFile(r.generation)));
      snap.payoff =
          PayoffFromCsv(ReadTextFile(run_dir / "payoff" / GenFile(r.generation)));
      if (snap.payoff.size() != static_cast<int>(pop.size())) {
        throw InvalidInput("population and payoff snapshot sizes differ");
      }
      snap.ids = Ids(pop);
    } catch (const Error&) {
      snap = PayoffSnapshot{};
    }
    trace.snapshots.push_back(std::move(snap));
  }
  return trace;
}

}  // namespace cole
