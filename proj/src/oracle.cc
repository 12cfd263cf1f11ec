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

#include "cole/oracle.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "cole/errors.h"

namespace cole {
namespace {

constexpr double kRestartNoise = 0.1;

void CheckPartners(std::span<const WeightedPartner> partners,
                   std::span<const Strategy> population) {
  for (const auto& p : partners) {
    if (p.index < 0 || p.index >= static_cast<int>(population.size())) {
      throw InvalidInput("partner index out of range");
    }
  }
}

// E_phi[w(s, p)] + alpha w(s, s), gated by which ratio terms are on.
double ExpectedObjective(const Strategy& s, std::span<const double> phi,
                         const OracleConfig& config,
                         std::span<const Strategy> population,
                         const StageGame& game) {
  std::vector<WeightedPartner> partners;
  if (config.ratio_b > 0) {
    for (std::size_t i = 0; i < phi.size(); ++i) {
      if (phi[i] > 0.0) partners.push_back({static_cast<int>(i), phi[i]});
    }
  }
  const double self = config.ratio_a > 0 ? config.alpha : 0.0;
  return Objective(s, partners, self, population, game);
}

Strategy Perturb(const Strategy& s, Rng& rng) {
  Strategy out = s;
  auto params = out.Parameters();
  for (double& p : params) p += kRestartNoise * (2.0 * UniformUnit(rng) - 1.0);
  out.SetParameters(params);
  ProjectStrategy(out);
  return out;
}

}  // namespace

std::string InitPolicyName(InitPolicy policy) {
  return policy == InitPolicy::kFresh ? "fresh" : "previous";
}

InitPolicy ParseInitPolicy(const std::string& name) {
  if (name == "fresh") return InitPolicy::kFresh;
  if (name == "previous") return InitPolicy::kPrevious;
  throw ConfigError("oracle.init", "expected fresh or previous, got '" + name + "'");
}

void OracleConfig::Validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("oracle.alpha", "must be a non-negative real");
  }
  if (ratio_a < 0 || ratio_b < 0 || ratio_a + ratio_b < 1) {
    throw ConfigError("oracle.ratio",
                      "needs non-negative a:b with a + b >= 1");
  }
  if (inner_updates < 1) {
    throw ConfigError("oracle.inner_updates", "must be a positive integer");
  }
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw ConfigError("oracle.step_size", "must be a positive real");
  }
  if (k < 1) throw ConfigError("oracle.k", "must be >= 1");
  if (max_restarts < 0) throw ConfigError("oracle.max_restarts", "must be >= 0");
}

double Objective(const Strategy& s, std::span<const WeightedPartner> partners,
                 double self_weight, std::span<const Strategy> population,
                 const StageGame& game) {
  CheckPartners(partners, population);
  const StageGame exact = game.Noiseless();
  double j = 0.0;
  for (const auto& p : partners) {
    j += p.weight * EvaluatePair(s, population[p.index], exact);
  }
  if (self_weight != 0.0) j += self_weight * EvaluatePair(s, s, exact);
  return j;
}

std::vector<double> FiniteDifferenceGradient(
    const Strategy& s, std::span<const WeightedPartner> partners,
    double self_weight, std::span<const Strategy> population,
    const StageGame& game, double h) {
  auto params = s.Parameters();
  std::vector<double> grad(params.size());
  Strategy probe = s;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double saved = params[k];
    params[k] = saved + h;
    probe.SetParameters(params);
    const double up = Objective(probe, partners, self_weight, population, game);
    params[k] = saved - h;
    probe.SetParameters(params);
    const double down = Objective(probe, partners, self_weight, population, game);
    params[k] = saved;
    grad[k] = (up - down) / (2.0 * h);
  }
  return grad;
}

std::vector<double> ObjectiveGradient(const Strategy& s,
                                      std::span<const WeightedPartner> partners,
                                      double self_weight,
                                      std::span<const Strategy> population,
                                      const StageGame& game) {
  CheckPartners(partners, population);
  if (game.kind == GameKind::kTwoStage) {
    return FiniteDifferenceGradient(s, partners, self_weight, population, game);
  }
  // w(x, y) = x^T S y with S = (U + U^T) / 2 after seat averaging.
  const int n = game.actions;
  auto sym = [&](int a, int b) { return 0.5 * (game.U(a, b) + game.U(b, a)); };
  std::vector<double> mixed(n, 0.0);
  for (const auto& p : partners) {
    const auto& y = population[p.index].first_round;
    for (int b = 0; b < n; ++b) mixed[b] += p.weight * y[b];
  }
  for (int b = 0; b < n; ++b) mixed[b] += 2.0 * self_weight * s.first_round[b];
  std::vector<double> grad(n, 0.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) grad[a] += sym(a, b) * mixed[b];
  }
  return grad;
}

void ProjectToSimplex(std::span<double> v) {
  const std::size_t n = v.size();
  if (n == 0) return;
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cumulative += sorted[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0.0) theta = t;
  }
  double total = 0.0;
  for (double& x : v) {
    x = std::max(x - theta, 0.0);
    total += x;
  }
  // Remove the rounding residue so the vector sums to 1 to machine precision.
  for (double& x : v) x /= total;
}

void ProjectStrategy(Strategy& s) {
  ProjectToSimplex(s.first_round);
  const int a = s.actions();
  for (std::size_t r = 0; r * a < s.response.size(); ++r) {
    ProjectToSimplex(std::span<double>(s.response).subspan(r * a, a));
  }
}

Strategy BestResponseStep(const Strategy& s,
                          std::span<const WeightedPartner> partners,
                          double self_weight,
                          std::span<const Strategy> population,
                          const StageGame& game, double step_size) {
  if (step_size == 0.0) return s;
  const auto grad = ObjectiveGradient(s, partners, self_weight, population, game);
  auto params = s.Parameters();
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (!std::isfinite(grad[k])) throw TrainingError("non-finite gradient");
    params[k] += step_size * grad[k];
  }
  Strategy out = s;
  out.SetParameters(params);
  ProjectStrategy(out);
  return out;
}

Strategy ExactBestResponse(const Strategy& s,
                           std::span<const WeightedPartner> partners,
                           std::span<const Strategy> population,
                           const StageGame& game) {
  if (game.kind != GameKind::kOneShot) {
    throw InvalidInput("exact best response is defined for one-shot games");
  }
  const auto grad = ObjectiveGradient(s, partners, 0.0, population, game);
  const int best = static_cast<int>(
      std::max_element(grad.begin(), grad.end()) - grad.begin());
  Strategy out = s;
  std::fill(out.first_round.begin(), out.first_round.end(), 0.0);
  out.first_round[best] = 1.0;
  return out;
}

PayoffMatrix ProspectiveMatrix(const PayoffMatrix& payoff,
                               std::span<const double> candidate_row) {
  const int n = payoff.size();
  if (static_cast<int>(candidate_row.size()) != n + 1) {
    throw InvalidInput("candidate row must cover the population and itself");
  }
  PayoffMatrix out(n + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.Set(i, j, payoff(i, j));
    out.Set(i, n, candidate_row[i]);
    out.Set(n, i, candidate_row[i]);
  }
  out.Set(n, n, candidate_row[n]);
  return out;
}

TrainReport TrainOracle(const Strategy& init, const OracleConfig& config,
                        TrainContext& context, Rng& rng) {
  config.Validate();
  const auto population = context.population;
  const StageGame& game = *context.game;
  const int n = static_cast<int>(population.size());
  if (n == 0) throw InvalidInput("oracle needs a non-empty population");
  if (static_cast<int>(context.phi.size()) != n) {
    throw InvalidInput("phi does not cover the population");
  }
  if (context.payoff == nullptr || context.payoff->size() != n) {
    throw InvalidInput("population payoff matrix missing or mis-sized");
  }
  CheckCompatible(init, game);

  const double self_weight = config.SelfWeight();
  const bool exact = config.exact_best_response &&
                     game.kind == GameKind::kOneShot && self_weight == 0.0;

  std::optional<TrainReport> best;
  for (int attempt = 0; attempt <= config.max_restarts; ++attempt) {
    TrainReport report;
    report.attempts = attempt + 1;
    Strategy s = attempt == 0 ? init : Perturb(init, rng);
    s.id = context.candidate_id;
    double current = ExpectedObjective(s, context.phi, config, population, game);
    for (int round = 0; round < config.inner_updates; ++round) {
      std::vector<WeightedPartner> partners;
      if (config.ratio_b > 0) {
        const auto scores =
            SucgScores(context.phi, *context.visits, context.sucg_c);
        for (int idx : SamplePartners(scores, config.ratio_b, rng,
                                      *context.visits)) {
          partners.push_back({idx, context.phi[idx]});
        }
      }
      if (exact) {
        Strategy next = ExactBestResponse(s, partners, population, game);
        const double value =
            ExpectedObjective(next, context.phi, config, population, game);
        if (value >= current) {
          s = std::move(next);
          current = value;
        }
      } else {
        s = BestResponseStep(s, partners, self_weight, population, game,
                             config.step_size);
        current = ExpectedObjective(s, context.phi, config, population, game);
      }
      if (!std::isfinite(current)) throw TrainingError("non-finite objective");
      report.objective_trace.push_back(current);
    }

    report.payoff_row.resize(n + 1);
    for (int i = 0; i < n; ++i) {
      report.payoff_row[i] =
          EvaluatePair(s, population[i], game,
                       PairSeed(context.noise_seed, s.id, population[i].id));
    }
    report.payoff_row[n] =
        EvaluatePair(s, s, game, PairSeed(context.noise_seed, s.id, s.id));
    const PayoffMatrix prospective =
        ProspectiveMatrix(*context.payoff, report.payoff_row);
    const auto centrality =
        PreferenceCentrality(BuildPreferenceGraph(BuildGameGraph(prospective)));
    report.eta = centrality.eta[n];
    report.rank = PreferenceRank(centrality, n);
    report.rank_satisfied = report.rank <= config.k;
    report.final_strategy = std::move(s);
    if (report.rank_satisfied) return report;
    const bool better =
        !best || report.rank < best->rank ||
        (report.rank == best->rank && report.eta < best->eta);
    if (better) {
      const int attempts = report.attempts;
      best = std::move(report);
      best->attempts = attempts;
    }
    best->attempts = attempt + 1;
  }
  return *best;
}

}  // namespace cole
