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

#ifndef COLE_GAME_GRAPH_H_
#define COLE_GAME_GRAPH_H_

#include <span>
#include <vector>

namespace cole {

// Dense n x n matrix of expected common payoffs; entry(i, j) is the payoff
// of strategy i partnered with strategy j. Indices are snapshot positions
// 0..n-1 in creation order.
class PayoffMatrix {
 public:
  PayoffMatrix() = default;
  explicit PayoffMatrix(int n, double fill = 0.0);
  // Throws InvalidInput unless `rows` is square and non-empty.
  static PayoffMatrix FromRows(const std::vector<std::vector<double>>& rows);

  int size() const { return n_; }
  double operator()(int i, int j) const { return entries_[Index(i, j)]; }
  void Set(int i, int j, double value);
  std::span<const double> Row(int i) const;
  const std::vector<double>& entries() const { return entries_; }

  // The flag may only be raised when entry(i, j) == entry(j, i) bit-exactly.
  bool symmetric() const { return symmetric_; }
  void MarkSymmetric();
  bool IsExactlySymmetric() const;
  bool AllFinite() const;

  // Principal submatrix over `indices`, in the given order.
  PayoffMatrix Restrict(std::span<const int> indices) const;

  bool operator==(const PayoffMatrix& other) const {
    return n_ == other.n_ && entries_ == other.entries_;
  }

 private:
  std::size_t Index(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }
  int n_ = 0;
  std::vector<double> entries_;
  bool symmetric_ = false;
};

// Complete weighted digraph over the strategies, self-loops included.
class GameGraph {
 public:
  explicit GameGraph(PayoffMatrix payoff) : payoff_(std::move(payoff)) {}
  int size() const { return payoff_.size(); }
  double weight(int from, int to) const { return payoff_(from, to); }
  const PayoffMatrix& payoff() const { return payoff_; }

 private:
  PayoffMatrix payoff_;
};

// One preferred partner per node: out_edge[i] != i.
struct PreferenceGraph {
  std::vector<int> out_edge;
  int size() const { return static_cast<int>(out_edge.size()); }
  bool operator==(const PreferenceGraph&) const = default;
};

struct CentralityReport {
  std::vector<double> eta;
  std::vector<int> in_degree;
  bool operator==(const CentralityReport&) const = default;
};

struct SubPreference {
  PreferenceGraph graph;
  CentralityReport centrality;
};

GameGraph BuildGameGraph(const PayoffMatrix& payoff);

// out_edge(i) = argmax_{j != i} weight(i, j), ties to the smallest index.
PreferenceGraph BuildPreferenceGraph(const GameGraph& graph);

// eta(i) = 1 - in_degree(i) / (n - 1).
CentralityReport PreferenceCentrality(const PreferenceGraph& graph);

// Entry m - 2 describes the first m strategies of `order`, m = 2..n.
std::vector<SubPreference> SubPreferenceGraphs(const PayoffMatrix& payoff,
                                               std::span<const int> order);

// Convex combination of payoff rows: sum_i weights[i] * row_i.
std::vector<double> GamescapeMixture(const PayoffMatrix& payoff,
                                     std::span<const double> weights);

// 1 + number of nodes with eta strictly below eta[node]. Ties count in the
// node's favour.
int PreferenceRank(const CentralityReport& centrality, int node);

}  // namespace cole

#endif  // COLE_GAME_GRAPH_H_
