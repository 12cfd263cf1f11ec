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

#include "cole/game_graph.h"

#include <cmath>
#include <numeric>
#include <string>

#include "cole/errors.h"

namespace cole {

PayoffMatrix::PayoffMatrix(int n, double fill) : n_(n) {
  if (n < 0) throw InvalidInput("payoff matrix size must be non-negative");
  entries_.assign(static_cast<std::size_t>(n) * n, fill);
}

PayoffMatrix PayoffMatrix::FromRows(
    const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw InvalidInput("payoff matrix must have at least one row");
  PayoffMatrix m(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      throw InvalidInput("payoff matrix is not square: row " +
                         std::to_string(i) + " has " +
                         std::to_string(rows[i].size()) + " entries, expected " +
                         std::to_string(n));
    }
    for (int j = 0; j < n; ++j) m.entries_[m.Index(i, j)] = rows[i][j];
  }
  return m;
}

void PayoffMatrix::Set(int i, int j, double value) {
  entries_[Index(i, j)] = value;
  if (symmetric_ && i != j && entries_[Index(j, i)] != value) {
    symmetric_ = false;
  }
}

std::span<const double> PayoffMatrix::Row(int i) const {
  return std::span<const double>(entries_).subspan(
      static_cast<std::size_t>(i) * n_, n_);
}

bool PayoffMatrix::IsExactlySymmetric() const {
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      if (entries_[Index(i, j)] != entries_[Index(j, i)]) return false;
    }
  }
  return true;
}

void PayoffMatrix::MarkSymmetric() {
  if (!IsExactlySymmetric()) {
    throw InvalidInput("payoff matrix is not exactly symmetric");
  }
  symmetric_ = true;
}

bool PayoffMatrix::AllFinite() const {
  for (double v : entries_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

PayoffMatrix PayoffMatrix::Restrict(std::span<const int> indices) const {
  const int m = static_cast<int>(indices.size());
  PayoffMatrix out(m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      out.entries_[out.Index(a, b)] = (*this)(indices[a], indices[b]);
    }
  }
  out.symmetric_ = symmetric_;
  return out;
}

GameGraph BuildGameGraph(const PayoffMatrix& payoff) {
  if (payoff.size() < 1) throw InvalidInput("game graph needs n >= 1");
  if (!payoff.AllFinite()) {
    throw InvalidInput("payoff matrix has a non-finite entry");
  }
  return GameGraph(payoff);
}

PreferenceGraph BuildPreferenceGraph(const GameGraph& graph) {
  const int n = graph.size();
  if (n < 2) {
    throw UndefinedPreference("preference graph needs at least two strategies");
  }
  PreferenceGraph pref;
  pref.out_edge.resize(n);
  for (int i = 0; i < n; ++i) {
    int best = -1;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      // Strict comparison keeps the smallest index on ties.
      if (best < 0 || graph.weight(i, j) > graph.weight(i, best)) best = j;
    }
    pref.out_edge[i] = best;
  }
  return pref;
}

CentralityReport PreferenceCentrality(const PreferenceGraph& graph) {
  const int n = graph.size();
  if (n < 2) {
    throw UndefinedPreference("centrality needs at least two strategies");
  }
  CentralityReport report;
  report.in_degree.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    const int to = graph.out_edge[i];
    if (to < 0 || to >= n || to == i) {
      throw InvalidInput("preference edge out of range or self-loop at node " +
                         std::to_string(i));
    }
    ++report.in_degree[to];
  }
  report.eta.resize(n);
  for (int i = 0; i < n; ++i) {
    report.eta[i] = 1.0 - static_cast<double>(report.in_degree[i]) / (n - 1);
  }
  return report;
}

std::vector<SubPreference> SubPreferenceGraphs(const PayoffMatrix& payoff,
                                               std::span<const int> order) {
  const int n = payoff.size();
  if (static_cast<int>(order.size()) != n) {
    throw InvalidInput("order length does not match payoff size");
  }
  std::vector<bool> seen(n, false);
  for (int id : order) {
    if (id < 0 || id >= n || seen[id]) {
      throw InvalidInput("order is not a permutation of node ids");
    }
    seen[id] = true;
  }
  if (n < 2) {
    throw UndefinedPreference("sub-preference graphs need at least two nodes");
  }
  std::vector<SubPreference> out;
  out.reserve(n - 1);
  for (int m = 2; m <= n; ++m) {
    const GameGraph g = BuildGameGraph(payoff.Restrict(order.first(m)));
    SubPreference entry;
    entry.graph = BuildPreferenceGraph(g);
    entry.centrality = PreferenceCentrality(entry.graph);
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<double> GamescapeMixture(const PayoffMatrix& payoff,
                                     std::span<const double> weights) {
  const int n = payoff.size();
  if (static_cast<int>(weights.size()) != n) {
    throw InvalidInput("mixture weights length does not match payoff size");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= -1e-9)) throw InvalidInput("mixture weight is negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidInput("mixture weights do not sum to 1");
  }
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (weights[i] == 0.0) continue;
    const auto row = payoff.Row(i);
    for (int j = 0; j < n; ++j) out[j] += weights[i] * row[j];
  }
  return out;
}

int PreferenceRank(const CentralityReport& centrality, int node) {
  const double mine = centrality.eta.at(node);
  int rank = 1;
  for (double e : centrality.eta) {
    if (e < mine) ++rank;
  }
  return rank;
}

}  // namespace cole
