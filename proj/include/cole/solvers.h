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

#ifndef COLE_SOLVERS_H_
#define COLE_SOLVERS_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cole/game_graph.h"
#include "cole/rng.h"

namespace cole {

struct PageRankOptions {
  double damping = 0.85;
  double tol = 1e-10;
  int max_iter = 10000;
};

struct UnpopularityWeights {
  std::vector<double> sigma_hat;
  std::vector<double> sigma;
};

struct ShapleyEstimate {
  std::vector<double> values;
  int sample_count = 0;
  std::vector<double> std_error;
};

// Probability vector over the population; heavier on strategies that
// coordinate poorly with the rest.
struct IncompatibilityDistribution {
  std::vector<double> phi;
};

enum class SolverFlag { kShapley, kReward };

struct SolverOptions {
  PageRankOptions pagerank;
  // Monte Carlo permutations; 0 selects max(1000, 200 n).
  int samples = 0;
};

// Everything a solver computed, kept for reporting (`cole solve`).
struct SolverResult {
  UnpopularityWeights weights;
  std::vector<double> raw;     // Shapley values or reward scores
  IncompatibilityDistribution distribution;
};

// Weighted PageRank over the game graph's positive off-diagonal edges,
// iterated from all-ones until the max-norm residual drops to `tol`.
// Throws DegenerateGraph when n >= 2 and no off-diagonal weight is positive,
// and ConvergenceError after `max_iter` sweeps.
std::vector<double> WeightedPageRank(const GameGraph& graph,
                                     const PageRankOptions& options = {});

// The linear operator of the PageRank recursion: sigma_hat = (1-d) + d M
// sigma_hat. Exposed so callers can solve the system directly.
std::vector<std::vector<double>> PageRankTransition(const GameGraph& graph);

UnpopularityWeights Unpopularity(std::span<const double> sigma_hat);

// v(C) = sum_{i,j in C} sigma_i sigma_j w(i,j) / |C|^2, v({}) = 0.
// `coalition` is a bit mask over snapshot indices.
double CoalitionValue(std::uint64_t coalition, std::span<const double> sigma,
                      const PayoffMatrix& payoff);

inline constexpr int kMaxExactShapley = 10;

using CharacteristicFunction = std::function<double(std::uint64_t)>;

// Exact Shapley values by the subset-weight form of the permutation average.
std::vector<double> ShapleyExact(int n, const CharacteristicFunction& value);
std::vector<double> ShapleyExact(const PayoffMatrix& payoff,
                                 std::span<const double> sigma);

// Permutations are drawn in blocks of n rotations; sample_count is `samples`
// rounded up to a multiple of n.
ShapleyEstimate ShapleyMonteCarlo(const PayoffMatrix& payoff,
                                  std::span<const double> sigma, int samples,
                                  Rng& rng);

inline constexpr double kIncompatibilityFloor = 1e-9;

// Clamp at 1e-9, normalize, then invert: phi = (1 - p) / sum(1 - p).
IncompatibilityDistribution ToIncompatibility(std::span<const double> values);

int DefaultShapleySamples(int n);

SolverResult GraphicShapleySolver(const PayoffMatrix& payoff, Rng& rng,
                                  const SolverOptions& options = {});
SolverResult RewardSolver(const PayoffMatrix& payoff,
                          const SolverOptions& options = {});

// Dispatches on the flag; n == 1 short-circuits to phi = [1].
SolverResult Solve(SolverFlag flag, const PayoffMatrix& payoff, Rng& rng,
                   const SolverOptions& options = {});

}  // namespace cole

#endif  // COLE_SOLVERS_H_
