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


#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cole/errors.h"
#include "cole/game_graph.h"
#include "cole/solvers.h"
#include "doctest.h"
#include "test_util.h"

namespace cole {
namespace {

// sigma_hat solves (I - d M) x = (1 - d) 1.
std::vector<double> DenseSolve(const GameGraph& graph, double d) {
  std::vector<std::vector<double>> m = PageRankTransition(graph);
  int n = graph.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) -= d * m[i][j];
  }
  Eigen::VectorXd b = Eigen::VectorXd::Constant(n, 1.0 - d);
  Eigen::VectorXd x = a.fullPivLu().solve(b);
  return std::vector<double>(x.data(), x.data() + n);
}

// Average marginal contribution over all n! orderings.
std::vector<double> PermutationShapley(int n,
                                       const CharacteristicFunction& v) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> sv(n, 0.0);
  double count = 0.0;
  do {
    std::uint64_t mask = 0;
    double prev = v(0);
    for (int p : perm) {
      mask |= std::uint64_t{1} << p;
      double cur = v(mask);
      sv[p] += cur - prev;
      prev = cur;
    }
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (double& x : sv) x /= count;
  return sv;
}

std::vector<double> RandomSigma(int n, Rng& rng) {
  std::vector<double> s(n);
  double total = 0.0;
  for (double& x : s) total += (x = 0.1 + UniformUnit(rng));
  for (double& x : s) x /= total;
  return s;
}

TEST_CASE("weighted pagerank closed forms") {
  std::vector<double> two =
      WeightedPageRank(BuildGameGraph(PayoffMatrix(2, 3.0)));
  CHECK(two[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(two[1] == doctest::Approx(1.0).epsilon(1e-9));

  std::vector<double> three =
      WeightedPageRank(BuildGameGraph(PayoffMatrix(3, 1.0)));
  for (double x : three) CHECK(std::abs(x - 0.15 / 0.575) < 1e-9);
}

TEST_CASE("weighted pagerank agrees with a dense linear solve") {
  for (int n = 2; n <= 20; ++n) {
    GameGraph g = BuildGameGraph(PayoffMatrix(n, 2.5));
    std::vector<double> fixed = WeightedPageRank(g);
    std::vector<double> direct = DenseSolve(g, 0.85);
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(fixed[i] - direct[i]) < 1e-8);
      CHECK(std::abs(fixed[i] - fixed[0]) < 1e-12);
    }
  }
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + static_cast<int>(rng() % 12);
    GameGraph g = BuildGameGraph(testing::RandomDense(n, rng, 0.1, 10.0));
    std::vector<double> fixed = WeightedPageRank(g);
    std::vector<double> direct = DenseSolve(g, 0.85);
    for (int i = 0; i < n; ++i) {
      CHECK(fixed[i] > 0.0);
      CHECK(std::abs(fixed[i] - direct[i]) < 1e-8);
    }
  }
}

TEST_CASE("weighted pagerank errors") {
  PayoffMatrix zero = PayoffMatrix::FromRows({{5, 0}, {0, 5}});
  CHECK_THROWS_AS(WeightedPageRank(BuildGameGraph(zero)), DegenerateGraph);

  PageRankOptions tight;
  tight.max_iter = 1;
  tight.tol = 0.0;
  Rng rng(2);
  GameGraph g = BuildGameGraph(testing::RandomDense(5, rng, 1.0, 9.0));
  try {
    WeightedPageRank(g, tight);
    FAIL("expected a convergence error");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual() >= 0.0);
  }
}

TEST_CASE("unpopularity") {
  UnpopularityWeights w = Unpopularity(std::vector<double>{1.0, 3.0});
  CHECK(w.sigma[0] == doctest::Approx(0.75));
  CHECK(w.sigma[1] == doctest::Approx(0.25));
  CHECK(Unpopularity(std::vector<double>{2.0}).sigma ==
        std::vector<double>{1.0});
  UnpopularityWeights eq = Unpopularity(std::vector<double>{0.4, 0.4, 0.4});
  for (double s : eq.sigma) CHECK(s == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(Unpopularity(std::vector<double>{1.0, 0.0}), InvalidInput);
  CHECK_THROWS_AS(Unpopularity(std::vector<double>{1.0, -2.0}), InvalidInput);
}

TEST_CASE("coalition value") {
  PayoffMatrix w = PayoffMatrix::FromRows({{4, 2}, {2, 8}});
  std::vector<double> sigma{0.5, 0.5};
  CHECK(CoalitionValue(0, sigma, w) == 0.0);
  CHECK(CoalitionValue(0b01, sigma, w) == doctest::Approx(0.25 * 4));
  CHECK(CoalitionValue(0b11, sigma, w) == doctest::Approx(1.0));
}

TEST_CASE("exact shapley examples and axioms") {
  CharacteristicFunction v = [](std::uint64_t m) {
    switch (m) {
      case 0b01: return 1.0;
      case 0b10: return 3.0;
      case 0b11: return 6.0;
      default: return 0.0;
    }
  };
  std::vector<double> sv = ShapleyExact(2, v);
  CHECK(sv[0] == doctest::Approx(2.0));
  CHECK(sv[1] == doctest::Approx(4.0));

  PayoffMatrix twins =
      PayoffMatrix::FromRows({{3, 3, 1}, {3, 3, 1}, {1, 1, 9}});
  std::vector<double> sigma{0.3, 0.3, 0.4};
  std::vector<double> t = ShapleyExact(twins, sigma);
  CHECK(t[0] == doctest::Approx(t[1]).epsilon(1e-12));

  CHECK_THROWS_AS(ShapleyExact(11, v), SizeGuard);
}

TEST_CASE("exact shapley matches permutation enumeration") {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + static_cast<int>(rng() % 6);
    PayoffMatrix m = testing::RandomDense(n, rng);
    std::vector<double> sigma = RandomSigma(n, rng);
    CharacteristicFunction v = [&](std::uint64_t mask) {
      return CoalitionValue(mask, sigma, m);
    };
    std::vector<double> exact = ShapleyExact(m, sigma);
    std::vector<double> ref = PermutationShapley(n, v);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(exact[i] - ref[i]) < 1e-10);
      total += exact[i];
    }
    CHECK(std::abs(total - v((std::uint64_t{1} << n) - 1)) < 1e-9);
  }
}

TEST_CASE("monte carlo shapley") {
  Rng rng(41);
  PayoffMatrix m = testing::RandomDense(5, rng);
  std::vector<double> sigma = RandomSigma(5, rng);
  std::vector<double> exact = ShapleyExact(m, sigma);
  double lo = *std::min_element(exact.begin(), exact.end());
  double hi = *std::max_element(exact.begin(), exact.end());

  Rng a(7);
  ShapleyEstimate est = ShapleyMonteCarlo(m, sigma, 20000, a);
  CHECK(est.sample_count == 20000);
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(est.values[i] - exact[i]) < 0.05 * (hi - lo));
    CHECK(est.std_error[i] >= 0.0);
  }

  Rng b(7);
  ShapleyEstimate again = ShapleyMonteCarlo(m, sigma, 20000, b);
  CHECK(again.values == est.values);

  // Error bars shrink roughly as 1/sqrt(samples).
  Rng c(8);
  ShapleyEstimate small = ShapleyMonteCarlo(m, sigma, 500, c);
  for (int i = 0; i < 5; ++i) {
    if (small.std_error[i] == 0.0) continue;
    double ratio = est.std_error[i] / small.std_error[i];
    CHECK(ratio == doctest::Approx(std::sqrt(500.0 / 20000.0)).epsilon(0.5));
  }

  PayoffMatrix one = PayoffMatrix::FromRows({{4}});
  std::vector<double> s1{1.0};
  Rng d(1);
  ShapleyEstimate single = ShapleyMonteCarlo(one, s1, 3, d);
  CHECK(single.values[0] == 4.0);
}

TEST_CASE("incompatibility inversion") {
  IncompatibilityDistribution d = ToIncompatibility(std::vector<double>{3, 1});
  CHECK(d.phi[0] == doctest::Approx(0.25));
  CHECK(d.phi[1] == doctest::Approx(0.75));

  IncompatibilityDistribution u =
      ToIncompatibility(std::vector<double>{2, 2, 2});
  for (double p : u.phi) CHECK(p == doctest::Approx(1.0 / 3.0));

  // p = [1, 1, 1, 5] / 8, 1 - p sums to 3.
  IncompatibilityDistribution f =
      ToIncompatibility(std::vector<double>{1, 1, 1, 5});
  CHECK(f.phi[0] == doctest::Approx(7.0 / 24.0));
  CHECK(f.phi[3] == doctest::Approx(1.0 / 8.0));

  CHECK(ToIncompatibility(std::vector<double>{-4}).phi ==
        std::vector<double>{1.0});

  IncompatibilityDistribution neg =
      ToIncompatibility(std::vector<double>{-1.0, 2.0, 0.0});
  double total = 0.0;
  for (double p : neg.phi) {
    CHECK(p >= 0.0);
    total += p;
  }
  CHECK(std::abs(total - 1.0) < 1e-9);
}

TEST_CASE("solvers on structured populations") {
  Rng rng(1);
  PayoffMatrix same(4, 5.0);
  same.MarkSymmetric();
  for (SolverFlag flag : {SolverFlag::kShapley, SolverFlag::kReward}) {
    SolverResult r = Solve(flag, same, rng);
    for (double p : r.distribution.phi) CHECK(p == doctest::Approx(0.25));
  }

  PayoffMatrix outcast = PayoffMatrix::FromRows(
      {{8, 7, 6, 0.1}, {7, 8, 7, 0.1}, {6, 7, 8, 0.1}, {0.1, 0.1, 0.1, 0.1}});
  for (SolverFlag flag : {SolverFlag::kShapley, SolverFlag::kReward}) {
    SolverResult r = Solve(flag, outcast, rng);
    const auto& phi = r.distribution.phi;
    CHECK(std::max_element(phi.begin(), phi.end()) - phi.begin() == 3);
  }

  PayoffMatrix hollow = PayoffMatrix::FromRows({{0, 10}, {10, 0}});
  SolverResult r = RewardSolver(hollow);
  CHECK(r.distribution.phi[0] == doctest::Approx(0.5));

  PayoffMatrix single = PayoffMatrix::FromRows({{3}});
  CHECK(Solve(SolverFlag::kShapley, single, rng).distribution.phi ==
        std::vector<double>{1.0});

  Rng a(99), b(99);
  CHECK(Solve(SolverFlag::kShapley, outcast, a).distribution.phi ==
        Solve(SolverFlag::kShapley, outcast, b).distribution.phi);
}

TEST_CASE("default sample count") {
  CHECK(DefaultShapleySamples(2) == 1000);
  CHECK(DefaultShapleySamples(10) == 2000);
}

}  // namespace
}  // namespace cole
