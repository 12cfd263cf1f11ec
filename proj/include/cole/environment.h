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

#ifndef COLE_ENVIRONMENT_H_
#define COLE_ENVIRONMENT_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cole/game_graph.h"
#include "cole/rng.h"

namespace cole {

// Persistent strategy identity, assigned in creation order and never reused.
struct StrategyId {
  std::int64_t value = 0;
  auto operator<=>(const StrategyId&) const = default;
};

enum class GameKind { kOneShot, kTwoStage };

std::string GameKindName(GameKind kind);
GameKind ParseGameKind(const std::string& name);

// Two-player common-payoff stage game. In the two-stage variant each player
// observes the partner's first action and draws a second action from its
// response row for that observation; both rounds pay out.
struct StageGame {
  GameKind kind = GameKind::kOneShot;
  int actions = 0;
  std::vector<double> utility;  // actions x actions, row-major
  double noise_std = 0.0;
  int episodes = 64;

  double U(int a, int b) const {
    return utility[static_cast<std::size_t>(a) * actions + b];
  }
  StageGame Noiseless() const {
    StageGame g = *this;
    g.noise_std = 0.0;
    return g;
  }
};

// U = diag(conventions) with `off_payoff` elsewhere. Throws InvalidInput
// unless off_payoff < min(conventions).
StageGame MakeConventionGame(std::span<const double> conventions,
                             double off_payoff, GameKind kind,
                             double noise_std = 0.0, int episodes = 64);

// Tabular stochastic policy. `response` is empty for one-shot games; for
// two-stage games row r (actions entries) is the second-round distribution
// after observing partner action r.
struct Strategy {
  StrategyId id;
  std::vector<double> first_round;
  std::vector<double> response;
  int birth_generation = 0;

  int actions() const { return static_cast<int>(first_round.size()); }
  std::span<const double> ResponseRow(int r) const {
    return std::span<const double>(response).subspan(
        static_cast<std::size_t>(r) * actions(), actions());
  }

  // first_round followed by the response rows.
  std::vector<double> Parameters() const;
  void SetParameters(std::span<const double> params);
};

bool IsSimplexValid(const Strategy& s, double tol = 1e-9);
// Throws InvalidInput if `s` is not shaped for `game`.
void CheckCompatible(const Strategy& s, const StageGame& game);

Strategy UniformStrategy(const StageGame& game);
// Every probability vector drawn uniformly from its simplex.
Strategy RandomStrategy(const StageGame& game, Rng& rng);
// Always plays `action`, in both rounds.
Strategy StubbornStrategy(const StageGame& game, int action);
// First round `first`, then copies the partner's observed first action.
Strategy CopyingStrategy(const StageGame& game, std::span<const double> first);

// Expected payoff with `a` in the first seat and `b` in the second.
double PlaySeats(const Strategy& a, const Strategy& b, const StageGame& game);

// Role-averaged expected payoff. Exact when noise_std == 0; otherwise a
// Monte Carlo mean of `episodes` rollouts per seat order, seeded by `seed`.
double EvaluatePair(const Strategy& a, const Strategy& b,
                    const StageGame& game, std::uint64_t seed = 0);

// Seed for the pair's noisy evaluation; symmetric in the two ids.
std::uint64_t PairSeed(std::uint64_t base, StrategyId a, StrategyId b);

// FNV-1a over the parameters printed with 12 significant digits.
std::uint64_t ContentHash(const Strategy& s);

// Memo of pair payoffs keyed by id pair and validated by content hash.
class PairCache {
 public:
  std::optional<double> Lookup(const Strategy& a, const Strategy& b) const;
  void Insert(const Strategy& a, const Strategy& b, double value);
  void Erase(StrategyId id);
  std::size_t size() const { return entries_.size(); }
  // Pair evaluations performed by CompletePayoffMatrix through this cache.
  long long evaluations() const { return evaluations_; }
  void CountEvaluation() { ++evaluations_; }

 private:
  struct Entry {
    std::uint64_t hash_lo;
    std::uint64_t hash_hi;
    double value;
  };
  std::map<std::pair<StrategyId, StrategyId>, Entry> entries_;
  long long evaluations_ = 0;
};

// Fills every entry (self-pairs included), evaluating only pairs missing
// from the cache. The result is marked symmetric.
PayoffMatrix CompletePayoffMatrix(std::span<const Strategy> population,
                                  const StageGame& game, PairCache& cache,
                                  std::uint64_t noise_seed = 0);

}  // namespace cole

#endif  // COLE_ENVIRONMENT_H_
