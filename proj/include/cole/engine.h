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

#ifndef COLE_ENGINE_H_
#define COLE_ENGINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cole/config.h"
#include "cole/environment.h"
#include "cole/game_graph.h"
#include "cole/rng.h"
#include "cole/sampler.h"

namespace cole {

struct GenerationRecord {
  int generation = 0;
  StrategyId new_id;
  double eta = 1.0;
  int rank = 0;
  bool rank_satisfied = false;
  std::vector<double> phi;         // over the population before expansion
  std::vector<double> payoff_row;  // new strategy vs population, then self
  std::optional<StrategyId> evicted_id;
  int attempts = 1;

  bool operator==(const GenerationRecord&) const = default;
};

// Population and payoffs right after a generation's expansion, before
// eviction. The new strategy is the last node.
struct PayoffSnapshot {
  std::vector<StrategyId> ids;
  PayoffMatrix payoff;
};

// Full pre-eviction state of a generation, as written to the run directory.
struct ExpandedPopulation {
  std::vector<Strategy> strategies;
  VisitCounts visits;
  PayoffMatrix payoff;
};

struct GenerationTrace {
  std::vector<GenerationRecord> records;  // generation t at index t - 1
  EngineConfig config;
  std::vector<PayoffSnapshot> snapshots;  // parallel to records
};

// Removes one of the `window` oldest strategies (by birth generation, then
// id) when the population exceeds `cap`. Visit counts stay aligned with the
// population and the cache forgets the evicted id.
std::optional<StrategyId> EvictIfFull(std::vector<Strategy>& population,
                                      VisitCounts& visits, PairCache& cache,
                                      int cap, int window, Rng& rng);

class Engine {
 public:
  explicit Engine(EngineConfig config);

  // Continues a run from the checkpoint in `run_dir`.
  static Engine Resume(const std::filesystem::path& run_dir);

  // Simulate, solve, train, expand and evict. When `expanded` is non-null
  // it receives the population as it stood before eviction.
  GenerationRecord RunGeneration(ExpandedPopulation* expanded = nullptr);

  const EngineConfig& config() const { return config_; }
  const StageGame& game() const { return game_; }
  const std::vector<Strategy>& population() const { return population_; }
  const VisitCounts& visits() const { return visits_; }
  const PairCache& cache() const { return cache_; }
  int generation() const { return generation_; }
  std::int64_t next_id() const { return next_id_; }
  const Rng& rng() const { return rng_; }

  void set_log(std::ostream* log) { log_ = log; }

 private:
  EngineConfig config_;
  StageGame game_;
  std::vector<Strategy> population_;
  VisitCounts visits_;
  PairCache cache_;
  Rng rng_;
  std::uint64_t noise_seed_ = 0;
  int generation_ = 0;
  std::int64_t next_id_ = 0;
  std::ostream* log_ = nullptr;
};

// Runs `config.generations` generations. With a run directory, writes
// config.snapshot, population/ and payoff/ snapshots, trace.jsonl and
// checkpoint.meta after every generation; on an error the files written so
// far stay in place and the error propagates.
GenerationTrace Run(const EngineConfig& config,
                    const std::optional<std::filesystem::path>& run_dir,
                    std::ostream* log = nullptr);

// Finishes a checkpointed run up to its configured generation count.
GenerationTrace ResumeRun(const std::filesystem::path& run_dir,
                          std::ostream* log = nullptr);

std::string RecordToJson(const GenerationRecord& record);
GenerationRecord RecordFromJson(const std::string& line);

// Reads trace.jsonl plus the per-generation payoff snapshots of a run
// directory. Snapshots that fail to parse are left empty (ids empty).
GenerationTrace LoadTrace(const std::filesystem::path& run_dir);

}  // namespace cole

#endif  // COLE_ENGINE_H_
