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

#include "cole/environment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "cole/errors.h"

namespace cole {
namespace {

bool OnSimplex(std::span<const double> p, double tol) {
  double total = 0.0;
  for (double x : p) {
    if (!(x >= -tol) || !std::isfinite(x)) return false;
    total += x;
  }
  return std::abs(total - 1.0) <= tol;
}

int SampleIndex(std::span<const double> p, Rng& rng) {
  const double u = UniformUnit(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<int>(i);
  }
  // Rounding left u above the total; take the last positive entry.
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] > 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(p.size()) - 1;
}

std::vector<double> RandomSimplex(int n, Rng& rng) {
  std::vector<double> p(n);
  double total = 0.0;
  for (double& x : p) {
    x = -std::log(1.0 - UniformUnit(rng));
    total += x;
  }
  for (double& x : p) x /= total;
  return p;
}

double SampleEpisode(const Strategy& a, const Strategy& b,
                     const StageGame& game, Rng& rng) {
  const int a1 = SampleIndex(a.first_round, rng);
  const int b1 = SampleIndex(b.first_round, rng);
  double total = game.U(a1, b1);
  if (game.kind == GameKind::kTwoStage) {
    const int a2 = SampleIndex(a.ResponseRow(b1), rng);
    const int b2 = SampleIndex(b.ResponseRow(a1), rng);
    total += game.U(a2, b2);
  }
  return total;
}

}  // namespace

std::string GameKindName(GameKind kind) {
  return kind == GameKind::kOneShot ? "one-shot" : "two-stage";
}

GameKind ParseGameKind(const std::string& name) {
  if (name == "one-shot" || name == "one_shot") return GameKind::kOneShot;
  if (name == "two-stage" || name == "two_stage") return GameKind::kTwoStage;
  throw InvalidInput("unknown game kind '" + name +
                     "' (expected one-shot or two-stage)");
}

StageGame MakeConventionGame(std::span<const double> conventions,
                             double off_payoff, GameKind kind,
                             double noise_std, int episodes) {
  if (conventions.empty()) throw InvalidInput("conventions must be non-empty");
  for (double c : conventions) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw InvalidInput("conventions must be positive and finite");
    }
  }
  const double lowest = *std::min_element(conventions.begin(), conventions.end());
  if (!(off_payoff < lowest)) {
    throw InvalidInput("off_payoff must be below every convention payoff");
  }
  if (!(noise_std >= 0.0)) throw InvalidInput("noise_std must be >= 0");
  if (episodes < 1) throw InvalidInput("episodes must be >= 1");
  StageGame game;
  game.kind = kind;
  game.actions = static_cast<int>(conventions.size());
  game.utility.assign(static_cast<std::size_t>(game.actions) * game.actions,
                      off_payoff);
  for (int a = 0; a < game.actions; ++a) {
    game.utility[static_cast<std::size_t>(a) * game.actions + a] = conventions[a];
  }
  game.noise_std = noise_std;
  game.episodes = episodes;
  return game;
}

std::vector<double> Strategy::Parameters() const {
  std::vector<double> out(first_round);
  out.insert(out.end(), response.begin(), response.end());
  return out;
}

void Strategy::SetParameters(std::span<const double> params) {
  if (params.size() != first_round.size() + response.size()) {
    throw InvalidInput("parameter vector has the wrong length");
  }
  std::copy_n(params.begin(), first_round.size(), first_round.begin());
  std::copy(params.begin() + first_round.size(), params.end(), response.begin());
}

bool IsSimplexValid(const Strategy& s, double tol) {
  const int a = s.actions();
  if (a == 0 || !OnSimplex(s.first_round, tol)) return false;
  if (s.response.empty()) return true;
  if (s.response.size() != static_cast<std::size_t>(a) * a) return false;
  for (int r = 0; r < a; ++r) {
    if (!OnSimplex(s.ResponseRow(r), tol)) return false;
  }
  return true;
}

void CheckCompatible(const Strategy& s, const StageGame& game) {
  const std::size_t a = game.actions;
  const std::size_t want_response =
      game.kind == GameKind::kTwoStage ? a * a : 0;
  if (s.first_round.size() != a || s.response.size() != want_response) {
    throw InvalidInput("strategy " + std::to_string(s.id.value) +
                       " is not shaped for a " + GameKindName(game.kind) +
                       " game with " + std::to_string(a) + " actions");
  }
}

Strategy UniformStrategy(const StageGame& game) {
  const int a = game.actions;
  Strategy s;
  s.first_round.assign(a, 1.0 / a);
  if (game.kind == GameKind::kTwoStage) {
    s.response.assign(static_cast<std::size_t>(a) * a, 1.0 / a);
  }
  return s;
}

Strategy RandomStrategy(const StageGame& game, Rng& rng) {
  const int a = game.actions;
  Strategy s;
  s.first_round = RandomSimplex(a, rng);
  if (game.kind == GameKind::kTwoStage) {
    for (int r = 0; r < a; ++r) {
      const auto row = RandomSimplex(a, rng);
      s.response.insert(s.response.end(), row.begin(), row.end());
    }
  }
  return s;
}

Strategy StubbornStrategy(const StageGame& game, int action) {
  const int a = game.actions;
  if (action < 0 || action >= a) throw InvalidInput("action out of range");
  Strategy s;
  s.first_round.assign(a, 0.0);
  s.first_round[action] = 1.0;
  if (game.kind == GameKind::kTwoStage) {
    for (int r = 0; r < a; ++r) {
      s.response.insert(s.response.end(), s.first_round.begin(),
                        s.first_round.end());
    }
  }
  return s;
}

Strategy CopyingStrategy(const StageGame& game, std::span<const double> first) {
  const int a = game.actions;
  if (static_cast<int>(first.size()) != a) {
    throw InvalidInput("first-round vector has the wrong length");
  }
  Strategy s;
  s.first_round.assign(first.begin(), first.end());
  if (game.kind == GameKind::kTwoStage) {
    s.response.assign(static_cast<std::size_t>(a) * a, 0.0);
    for (int r = 0; r < a; ++r) s.response[static_cast<std::size_t>(r) * a + r] = 1.0;
  }
  return s;
}

double PlaySeats(const Strategy& a, const Strategy& b, const StageGame& game) {
  CheckCompatible(a, game);
  CheckCompatible(b, game);
  const int n = game.actions;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double joint = a.first_round[i] * b.first_round[j];
      if (joint == 0.0) continue;
      double value = game.U(i, j);
      if (game.kind == GameKind::kTwoStage) {
        // a saw j, b saw i.
        const auto ra = a.ResponseRow(j);
        const auto rb = b.ResponseRow(i);
        double second = 0.0;
        for (int x = 0; x < n; ++x) {
          if (ra[x] == 0.0) continue;
          for (int y = 0; y < n; ++y) second += ra[x] * rb[y] * game.U(x, y);
        }
        value += second;
      }
      total += joint * value;
    }
  }
  return total;
}

double EvaluatePair(const Strategy& a, const Strategy& b, const StageGame& game,
                    std::uint64_t seed) {
  if (game.noise_std <= 0.0) {
    return 0.5 * (PlaySeats(a, b, game) + PlaySeats(b, a, game));
  }
  CheckCompatible(a, game);
  CheckCompatible(b, game);
  Rng rng(seed);
  std::normal_distribution<double> noise(0.0, game.noise_std);
  double total = 0.0;
  for (int e = 0; e < game.episodes; ++e) {
    total += SampleEpisode(a, b, game, rng) + noise(rng);
    total += SampleEpisode(b, a, game, rng) + noise(rng);
  }
  return total / (2.0 * game.episodes);
}

std::uint64_t PairSeed(std::uint64_t base, StrategyId a, StrategyId b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b).value);
  const auto hi = static_cast<std::uint64_t>(std::max(a, b).value);
  return DeriveSeed(base, {lo, hi});
}

std::uint64_t ContentHash(const Strategy& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[64];
  for (double p : s.Parameters()) {
    const int len = std::snprintf(buf, sizeof(buf), "%.12g,", p);
    for (int i = 0; i < len; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::optional<double> PairCache::Lookup(const Strategy& a,
                                        const Strategy& b) const {
  const bool swap = b.id < a.id;
  const Strategy& lo = swap ? b : a;
  const Strategy& hi = swap ? a : b;
  auto it = entries_.find({lo.id, hi.id});
  if (it == entries_.end()) return std::nullopt;
  if (it->second.hash_lo != ContentHash(lo) ||
      it->second.hash_hi != ContentHash(hi)) {
    return std::nullopt;
  }
  return it->second.value;
}

void PairCache::Insert(const Strategy& a, const Strategy& b, double value) {
  const bool swap = b.id < a.id;
  const Strategy& lo = swap ? b : a;
  const Strategy& hi = swap ? a : b;
  entries_[{lo.id, hi.id}] = Entry{ContentHash(lo), ContentHash(hi), value};
}

void PairCache::Erase(StrategyId id) {
  std::erase_if(entries_, [id](const auto& kv) {
    return kv.first.first == id || kv.first.second == id;
  });
}

PayoffMatrix CompletePayoffMatrix(std::span<const Strategy> population,
                                  const StageGame& game, PairCache& cache,
                                  std::uint64_t noise_seed) {
  const int n = static_cast<int>(population.size());
  if (n == 0) throw InvalidInput("population is empty");
  for (const auto& s : population) CheckCompatible(s, game);
  PayoffMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const Strategy& a = population[i];
      const Strategy& b = population[j];
      double value;
      if (auto hit = cache.Lookup(a, b)) {
        value = *hit;
      } else {
        value = EvaluatePair(a, b, game, PairSeed(noise_seed, a.id, b.id));
        cache.Insert(a, b, value);
        cache.CountEvaluation();
      }
      m.Set(i, j, value);
      m.Set(j, i, value);
    }
  }
  m.MarkSymmetric();
  return m;
}

}  // namespace cole
