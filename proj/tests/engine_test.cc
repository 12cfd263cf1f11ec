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


#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cole/config.h"
#include "cole/csv_io.h"
#include "cole/engine.h"
#include "cole/environment.h"
#include "cole/errors.h"
#include "doctest.h"
#include "test_util.h"

namespace cole {
namespace {

namespace fs = std::filesystem;

EngineConfig SmallConfig() {
  EngineConfig c;
  c.env.conventions = {10, 8, 6};
  c.generations = 6;
  c.pop_cap = 4;
  c.evict_window = 2;
  c.seed = 5;
  return c;
}

std::vector<Strategy> AgedPopulation(const StageGame& g, int n) {
  std::vector<Strategy> pop;
  for (int i = 0; i < n; ++i) {
    pop.push_back(UniformStrategy(g));
    pop.back().id = StrategyId{i};
    pop.back().birth_generation = i;
  }
  return pop;
}

std::string FirstLines(const std::string& text, int count) {
  std::size_t end = 0;
  for (int i = 0; i < count; ++i) end = text.find('\n', end) + 1;
  return text.substr(0, end);
}

TEST_CASE("eviction contract") {
  StageGame g = SmallConfig().env.Build();
  PairCache cache;
  Rng rng(1);

  std::vector<Strategy> at_cap = AgedPopulation(g, 4);
  VisitCounts v{{0, 0, 0, 0}};
  CHECK_FALSE(EvictIfFull(at_cap, v, cache, 4, 2, rng).has_value());
  CHECK(at_cap.size() == 4);

  std::vector<Strategy> over = AgedPopulation(g, 5);
  VisitCounts v5{{1, 2, 3, 4, 5}};
  auto evicted = EvictIfFull(over, v5, cache, 4, 1, rng);
  REQUIRE(evicted.has_value());
  CHECK(evicted->value == 0);
  CHECK(over.size() == 4);
  CHECK(v5.counts == std::vector<long long>{2, 3, 4, 5});
}

TEST_CASE("eviction is uniform over the window") {
  StageGame g = SmallConfig().env.Build();
  PairCache cache;
  Rng rng(2);
  std::map<std::int64_t, int> hits;
  const int kTrials = 10000;
  for (int t = 0; t < kTrials; ++t) {
    std::vector<Strategy> pop = AgedPopulation(g, 21);
    VisitCounts v{std::vector<long long>(21, 0)};
    auto id = EvictIfFull(pop, v, cache, 20, 10, rng);
    ++hits[id->value];
  }
  CHECK(hits.size() == 10);
  for (const auto& [id, count] : hits) {
    CHECK(id < 10);
    CHECK(std::abs(count / static_cast<double>(kTrials) - 0.1) <= 0.01);
  }
}

TEST_CASE("first generation from a singleton population") {
  Engine engine(SmallConfig());
  CHECK(engine.population().size() == 1);
  GenerationRecord r = engine.RunGeneration();
  CHECK(r.generation == 1);
  CHECK(r.phi == std::vector<double>{1.0});
  CHECK(r.new_id.value == 1);
  CHECK(r.payoff_row.size() == 2);
  CHECK(engine.population().size() == 2);
  CHECK(r.rank_satisfied == (r.rank <= 3));
}

TEST_CASE("population stays at the cap") {
  EngineConfig c = SmallConfig();
  Engine engine(c);
  for (int t = 1; t <= 8; ++t) {
    ExpandedPopulation ex;
    GenerationRecord r = engine.RunGeneration(&ex);
    int before = static_cast<int>(ex.strategies.size());
    CHECK(before == std::min(t + 1, c.pop_cap + 1));
    CHECK(r.evicted_id.has_value() == (before > c.pop_cap));
    CHECK(static_cast<int>(engine.population().size()) ==
          std::min(before, c.pop_cap));
    double total = 0.0;
    for (double p : r.phi) total += p;
    CHECK(std::abs(total - 1.0) < 1e-9);
    CHECK(r.eta >= 0.0);
    CHECK(r.eta <= 1.0);
    for (const auto& s : engine.population()) CHECK(IsSimplexValid(s));
  }
  CHECK(engine.next_id() == 9);
}

TEST_CASE("zero generations persist the initial population") {
  EngineConfig c = SmallConfig();
  c.generations = 0;
  c.initial_population = 3;
  fs::path dir = testing::TempDir("engine_zero");
  GenerationTrace trace = Run(c, dir);
  CHECK(trace.records.empty());
  CHECK(ReadTextFile(dir / "trace.jsonl").empty());
  CHECK(PopulationFromCsv(ReadTextFile(dir / "population" / "gen_0.csv")).size() == 3);
  CHECK(PayoffFromCsv(ReadTextFile(dir / "payoff" / "gen_0.csv")).size() == 3);
}

TEST_CASE("runs are deterministic and resumable") {
  EngineConfig c = SmallConfig();
  fs::path a = testing::TempDir("engine_a");
  fs::path b = testing::TempDir("engine_b");
  Run(c, a);
  Run(c, b);
  std::string trace_a = ReadTextFile(a / "trace.jsonl");
  CHECK(trace_a == ReadTextFile(b / "trace.jsonl"));

  // Stop after three generations, then resume to six.
  fs::path r = testing::TempDir("engine_resume");
  EngineConfig part = c;
  part.generations = 3;
  Run(part, r);
  WriteTextFile(r / "config.snapshot", ConfigToText(c));
  GenerationTrace resumed = ResumeRun(r);
  CHECK(resumed.records.size() == 6);
  CHECK(ReadTextFile(r / "trace.jsonl") == trace_a);
  for (int t = 0; t <= 6; ++t) {
    std::string f = "gen_" + std::to_string(t) + ".csv";
    CHECK(ReadTextFile(r / "population" / f) == ReadTextFile(a / "population" / f));
    CHECK(ReadTextFile(r / "payoff" / f) == ReadTextFile(a / "payoff" / f));
  }

  // Records written past the checkpoint are discarded on resume.
  fs::path x = testing::TempDir("engine_extra");
  Run(part, x);
  WriteTextFile(x / "trace.jsonl", FirstLines(trace_a, 4));
  WriteTextFile(x / "config.snapshot", ConfigToText(c));
  ResumeRun(x);
  CHECK(ReadTextFile(x / "trace.jsonl") == trace_a);
}

TEST_CASE("loaded traces match the in-memory trace") {
  EngineConfig c = SmallConfig();
  fs::path dir = testing::TempDir("engine_load");
  GenerationTrace live = Run(c, dir);
  GenerationTrace loaded = LoadTrace(dir);
  CHECK(loaded.records == live.records);
  REQUIRE(loaded.snapshots.size() == live.snapshots.size());
  for (std::size_t i = 0; i < live.snapshots.size(); ++i) {
    CHECK(loaded.snapshots[i].ids == live.snapshots[i].ids);
    CHECK(loaded.snapshots[i].payoff == live.snapshots[i].payoff);
  }
  for (const auto& rec : live.records) {
    CHECK(RecordFromJson(RecordToJson(rec)) == rec);
  }
}

TEST_CASE("solver flags differ only downstream of phi") {
  EngineConfig sv = SmallConfig();
  EngineConfig r = sv;
  r.solver = SolverFlag::kReward;
  Engine a(sv), b(r);
  GenerationRecord ra = a.RunGeneration();
  GenerationRecord rb = b.RunGeneration();
  // A singleton population gives phi = [1] under either flag.
  CHECK(ra.phi == rb.phi);
  CHECK(ra.payoff_row == rb.payoff_row);
}

TEST_CASE("invalid engine config") {
  EngineConfig c = SmallConfig();
  c.evict_window = 10;
  CHECK_THROWS_AS(Engine{c}, ConfigError);
}

}  // namespace
}  // namespace cole
