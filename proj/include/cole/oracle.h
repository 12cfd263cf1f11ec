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

#ifndef COLE_ORACLE_H_
#define COLE_ORACLE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cole/environment.h"
#include "cole/game_graph.h"
#include "cole/rng.h"
#include "cole/sampler.h"

namespace cole {

// Where a generation's candidate starts: a fresh random policy (a new
// network initialization) or the most recently added strategy.
enum class InitPolicy { kFresh, kPrevious };

std::string InitPolicyName(InitPolicy policy);
InitPolicy ParseInitPolicy(const std::string& name);

struct OracleConfig {
  double alpha = 1.0;
  // a:b = self-play batches : partner draws per ascent round.
  int ratio_a = 1;
  int ratio_b = 3;
  int inner_updates = 10;
  double step_size = 0.5;
  int k = 3;
  int max_restarts = 3;
  // One-shot games with no self term: jump to the best-responding vertex.
  bool exact_best_response = false;
  InitPolicy init = InitPolicy::kFresh;

  // Throws ConfigError naming the offending `oracle.*` key.
  void Validate() const;
  double SelfWeight() const { return alpha * ratio_a; }
};

// A sampled partner, by population position, with its phi weight.
struct WeightedPartner {
  int index = 0;
  double weight = 0.0;
};

struct TrainReport {
  Strategy final_strategy;
  double eta = 1.0;
  int rank = 0;
  bool rank_satisfied = false;
  std::vector<double> objective_trace;
  // Candidate payoffs against the population, then against itself.
  std::vector<double> payoff_row;
  int attempts = 0;
};

// sum_p weight(p) w(s, p) + self_weight w(s, s), noise-free.
double Objective(const Strategy& s, std::span<const WeightedPartner> partners,
                 double self_weight, std::span<const Strategy> population,
                 const StageGame& game);

// Gradient with respect to Strategy::Parameters(). Analytic for one-shot
// games, central differences (h = 1e-5) for two-stage games.
std::vector<double> ObjectiveGradient(const Strategy& s,
                                      std::span<const WeightedPartner> partners,
                                      double self_weight,
                                      std::span<const Strategy> population,
                                      const StageGame& game);

std::vector<double> FiniteDifferenceGradient(
    const Strategy& s, std::span<const WeightedPartner> partners,
    double self_weight, std::span<const Strategy> population,
    const StageGame& game, double h = 1e-5);

// Euclidean projection onto the probability simplex, in place.
void ProjectToSimplex(std::span<double> v);
// Projects the first-round vector and every response row.
void ProjectStrategy(Strategy& s);

// One projected-gradient ascent step.
Strategy BestResponseStep(const Strategy& s,
                          std::span<const WeightedPartner> partners,
                          double self_weight,
                          std::span<const Strategy> population,
                          const StageGame& game, double step_size);

// Pure best response to a linear one-shot objective (self_weight == 0).
Strategy ExactBestResponse(const Strategy& s,
                           std::span<const WeightedPartner> partners,
                           std::span<const Strategy> population,
                           const StageGame& game);

// Everything the oracle reads from the running generation.
struct TrainContext {
  std::span<const Strategy> population;
  const PayoffMatrix* payoff = nullptr;  // population payoffs
  std::span<const double> phi;
  VisitCounts* visits = nullptr;
  const StageGame* game = nullptr;
  double sucg_c = 0.5;
  StrategyId candidate_id;
  std::uint64_t noise_seed = 0;
};

// Population payoff matrix extended with the candidate as the last node.
PayoffMatrix ProspectiveMatrix(const PayoffMatrix& payoff,
                               std::span<const double> candidate_row);

TrainReport TrainOracle(const Strategy& init, const OracleConfig& config,
                        TrainContext& context, Rng& rng);

}  // namespace cole

#endif  // COLE_ORACLE_H_
