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

#include "cole/solvers.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "cole/errors.h"

namespace cole {
namespace {

void CheckSigma(std::span<const double> sigma, int n) {
  if (static_cast<int>(sigma.size()) != n) {
    throw InvalidInput("sigma length does not match payoff size");
  }
}

}  // namespace

std::vector<std::vector<double>> PageRankTransition(const GameGraph& graph) {
  const int n = graph.size();
  std::vector<double> in_weight(n, 0.0), out_weight(n, 0.0);
  bool any_edge = false;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      const double w = graph.weight(u, v);
      if (!std::isfinite(w) || w < 0.0) {
        throw InvalidInput("weighted PageRank needs finite non-negative weights");
      }
      out_weight[u] += w;
      in_weight[v] += w;
      if (w > 0.0) any_edge = true;
    }
  }
  if (n >= 2 && !any_edge) {
    throw DegenerateGraph("all off-diagonal weights are zero");
  }
  // For each source v, the in/out mass of the nodes it links to.
  std::vector<double> linked_in(n, 0.0), linked_out(n, 0.0);
  for (int v = 0; v < n; ++v) {
    for (int p = 0; p < n; ++p) {
      if (p == v || !(graph.weight(v, p) > 0.0)) continue;
      linked_in[v] += in_weight[p];
      linked_out[v] += out_weight[p];
    }
  }
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v || !(graph.weight(v, u) > 0.0)) continue;
      if (linked_in[v] <= 0.0 || linked_out[v] <= 0.0) continue;
      m[u][v] = (in_weight[u] / linked_in[v]) * (out_weight[u] / linked_out[v]);
    }
  }
  return m;
}

std::vector<double> WeightedPageRank(const GameGraph& graph,
                                     const PageRankOptions& options) {
  const int n = graph.size();
  if (n < 1) throw InvalidInput("weighted PageRank needs n >= 1");
  if (!(options.damping > 0.0 && options.damping < 1.0)) {
    throw InvalidInput("damping must lie in (0, 1)");
  }
  const auto m = PageRankTransition(graph);
  const double d = options.damping;
  std::vector<double> rank(n, 1.0), next(n);
  double residual = 0.0;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    residual = 0.0;
    for (int u = 0; u < n; ++u) {
      double acc = 0.0;
      for (int v = 0; v < n; ++v) acc += m[u][v] * rank[v];
      next[u] = (1.0 - d) + d * acc;
      residual = std::max(residual, std::abs(next[u] - rank[u]));
    }
    rank.swap(next);
    if (residual <= options.tol) return rank;
  }
  throw ConvergenceError("weighted PageRank did not converge in " +
                             std::to_string(options.max_iter) +
                             " iterations (residual " +
                             std::to_string(residual) + ")",
                         residual);
}

UnpopularityWeights Unpopularity(std::span<const double> sigma_hat) {
  if (sigma_hat.empty()) throw InvalidInput("empty sigma_hat");
  UnpopularityWeights out;
  out.sigma_hat.assign(sigma_hat.begin(), sigma_hat.end());
  out.sigma.resize(sigma_hat.size());
  double total = 0.0;
  for (std::size_t i = 0; i < sigma_hat.size(); ++i) {
    if (!(sigma_hat[i] > 0.0) || !std::isfinite(sigma_hat[i])) {
      throw InvalidInput("sigma_hat entries must be positive and finite");
    }
    out.sigma[i] = 1.0 / sigma_hat[i];
    total += out.sigma[i];
  }
  for (double& s : out.sigma) s /= total;
  return out;
}

double CoalitionValue(std::uint64_t coalition, std::span<const double> sigma,
                      const PayoffMatrix& payoff) {
  const int n = payoff.size();
  CheckSigma(sigma, n);
  if (coalition == 0) return 0.0;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(coalition >> i & 1)) continue;
    for (int j = 0; j < n; ++j) {
      if (!(coalition >> j & 1)) continue;
      total += sigma[i] * sigma[j] * payoff(i, j);
    }
  }
  const double size = std::popcount(coalition);
  return total / (size * size);
}

std::vector<double> ShapleyExact(int n, const CharacteristicFunction& value) {
  if (n < 1) throw InvalidInput("Shapley value needs n >= 1");
  if (n > kMaxExactShapley) {
    throw SizeGuard("exact Shapley supports n <= " +
                    std::to_string(kMaxExactShapley) + ", got " +
                    std::to_string(n));
  }
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<double> v(full + 1);
  for (std::uint64_t mask = 0; mask <= full; ++mask) v[mask] = value(mask);

  // weight[s] = s! (n - s - 1)! / n!
  std::vector<double> weight(n);
  for (int s = 0; s < n; ++s) {
    double w = 1.0 / n;
    // 1 / (n * C(n-1, s))
    double binom = 1.0;
    for (int k = 1; k <= s; ++k) binom = binom * (n - 1 - s + k) / k;
    weight[s] = w / binom;
  }
  std::vector<double> sv(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint64_t mask = 0; mask <= full; ++mask) {
      if (mask & bit) continue;
      sv[i] += weight[std::popcount(mask)] * (v[mask | bit] - v[mask]);
    }
  }
  return sv;
}

std::vector<double> ShapleyExact(const PayoffMatrix& payoff,
                                 std::span<const double> sigma) {
  const int n = payoff.size();
  CheckSigma(sigma, n);
  if (n > kMaxExactShapley) {
    throw SizeGuard("exact Shapley supports n <= " +
                    std::to_string(kMaxExactShapley) + ", got " +
                    std::to_string(n));
  }
  // Pair sums T(C) = sum_{i,j in C} sigma_i sigma_j w(i,j), built by
  // adding the lowest member last.
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<double> pair_sum(full + 1, 0.0);
  for (std::uint64_t mask = 1; mask <= full; ++mask) {
    const int l = std::countr_zero(mask);
    const std::uint64_t rest = mask & (mask - 1);
    double add = sigma[l] * sigma[l] * payoff(l, l);
    for (int j = 0; j < n; ++j) {
      if (rest >> j & 1) {
        add += sigma[l] * sigma[j] * (payoff(l, j) + payoff(j, l));
      }
    }
    pair_sum[mask] = pair_sum[rest] + add;
  }
  return ShapleyExact(n, [&](std::uint64_t mask) {
    if (mask == 0) return 0.0;
    const double size = std::popcount(mask);
    return pair_sum[mask] / (size * size);
  });
}

ShapleyEstimate ShapleyMonteCarlo(const PayoffMatrix& payoff,
                                  std::span<const double> sigma, int samples,
                                  Rng& rng) {
  const int n = payoff.size();
  CheckSigma(sigma, n);
  if (samples < 1) throw InvalidInput("Monte Carlo Shapley needs samples >= 1");
  // Each drawn permutation is scored with all n of its rotations. Every
  // rotation is itself uniform, and each player meets every position once
  // per block, so symmetric players get identical estimates.
  const int blocks = (samples + n - 1) / n;
  std::vector<double> mean(n, 0.0), m2(n, 0.0), block(n);
  std::vector<int> perm(n), rotated(n);
  for (int b = 0; b < blocks; ++b) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(UniformUnit(rng) * (i + 1));
      std::swap(perm[i], perm[j]);
    }
    std::fill(block.begin(), block.end(), 0.0);
    for (int shift = 0; shift < n; ++shift) {
      std::rotate_copy(perm.begin(), perm.begin() + shift, perm.end(),
                       rotated.begin());
      double pair_sum = 0.0;
      double previous = 0.0;
      for (int pos = 0; pos < n; ++pos) {
        const int k = rotated[pos];
        double add = sigma[k] * sigma[k] * payoff(k, k);
        for (int q = 0; q < pos; ++q) {
          const int j = rotated[q];
          add += sigma[k] * sigma[j] * (payoff(k, j) + payoff(j, k));
        }
        pair_sum += add;
        const double size = pos + 1;
        const double value = pair_sum / (size * size);
        block[k] += value - previous;
        previous = value;
      }
    }
    // Welford update over block means.
    for (int k = 0; k < n; ++k) {
      const double x = block[k] / n;
      const double delta = x - mean[k];
      mean[k] += delta / (b + 1);
      m2[k] += delta * (x - mean[k]);
    }
  }
  ShapleyEstimate est;
  est.values = mean;
  est.sample_count = blocks * n;
  est.std_error.assign(n, 0.0);
  if (blocks > 1) {
    for (int i = 0; i < n; ++i) {
      est.std_error[i] = std::sqrt(m2[i] / (blocks - 1) / blocks);
    }
  }
  return est;
}

IncompatibilityDistribution ToIncompatibility(std::span<const double> values) {
  IncompatibilityDistribution out;
  const std::size_t n = values.size();
  if (n == 0) throw InvalidInput("incompatibility needs at least one value");
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidInput("solver value is not finite");
  }
  if (n == 1) {
    out.phi = {1.0};
    return out;
  }
  std::vector<double> p(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = std::max(values[i], kIncompatibilityFloor);
    total += p[i];
  }
  double inverted_total = 0.0;
  for (double& x : p) {
    x = 1.0 - x / total;
    inverted_total += x;
  }
  for (double& x : p) x /= inverted_total;
  out.phi = std::move(p);
  return out;
}

int DefaultShapleySamples(int n) { return std::max(1000, 200 * n); }

namespace {

UnpopularityWeights ComputeWeights(const PayoffMatrix& payoff,
                                   const SolverOptions& options) {
  const GameGraph graph = BuildGameGraph(payoff);
  return Unpopularity(WeightedPageRank(graph, options.pagerank));
}

}  // namespace

SolverResult GraphicShapleySolver(const PayoffMatrix& payoff, Rng& rng,
                                  const SolverOptions& options) {
  SolverResult result;
  result.weights = ComputeWeights(payoff, options);
  const int samples = options.samples > 0 ? options.samples
                                          : DefaultShapleySamples(payoff.size());
  result.raw =
      ShapleyMonteCarlo(payoff, result.weights.sigma, samples, rng).values;
  result.distribution = ToIncompatibility(result.raw);
  return result;
}

SolverResult RewardSolver(const PayoffMatrix& payoff,
                          const SolverOptions& options) {
  SolverResult result;
  result.weights = ComputeWeights(payoff, options);
  const auto& sigma = result.weights.sigma;
  const int n = payoff.size();
  result.raw.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      result.raw[i] += sigma[i] * sigma[j] * payoff(i, j);
    }
  }
  result.distribution = ToIncompatibility(result.raw);
  return result;
}

SolverResult Solve(SolverFlag flag, const PayoffMatrix& payoff, Rng& rng,
                   const SolverOptions& options) {
  if (payoff.size() < 1) throw InvalidInput("solver needs a non-empty matrix");
  if (payoff.size() == 1) {
    SolverResult result;
    result.weights = ComputeWeights(payoff, options);
    result.raw = {CoalitionValue(1, result.weights.sigma, payoff)};
    result.distribution.phi = {1.0};
    return result;
  }
  return flag == SolverFlag::kShapley ? GraphicShapleySolver(payoff, rng, options)
                                      : RewardSolver(payoff, options);
}

}  // namespace cole
