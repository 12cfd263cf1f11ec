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

#include "cole/sampler.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cole/errors.h"

namespace cole {

long long VisitCounts::Total() const {
  return std::accumulate(counts.begin(), counts.end(), 0LL);
}

std::vector<double> SucgScores(std::span<const double> phi,
                               const VisitCounts& visits, double c) {
  if (visits.counts.size() != phi.size()) {
    throw InvalidInput("visit counts missing for some strategies");
  }
  if (!(c >= 0.0)) throw InvalidInput("exploration constant must be >= 0");
  const double root = std::sqrt(static_cast<double>(visits.Total()));
  std::vector<double> scores(phi.size());
  for (std::size_t u = 0; u < phi.size(); ++u) {
    if (phi[u] < 0.0 || visits.counts[u] < 0) {
      throw InvalidInput("negative phi or visit count");
    }
    scores[u] = phi[u] + c * root / (1.0 + static_cast<double>(visits.counts[u]));
  }
  return scores;
}

std::vector<int> SamplePartners(std::span<const double> scores, int draws,
                                Rng& rng, VisitCounts& visits) {
  if (draws < 0) throw InvalidInput("draw count must be >= 0");
  if (visits.counts.size() != scores.size()) {
    throw InvalidInput("visit counts missing for some strategies");
  }
  std::vector<double> cumulative(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!(scores[i] >= 0.0) || !std::isfinite(scores[i])) {
      throw InvalidInput("sampling scores must be finite and non-negative");
    }
    total += scores[i];
    cumulative[i] = total;
  }
  if (!(total > 0.0)) throw InvalidInput("sampling scores are all zero");
  std::vector<int> out;
  out.reserve(draws);
  for (int d = 0; d < draws; ++d) {
    const double target = UniformUnit(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    int idx = static_cast<int>(it - cumulative.begin());
    // Skip trailing zero-score entries reached through rounding.
    if (idx >= static_cast<int>(scores.size())) idx = static_cast<int>(scores.size()) - 1;
    while (scores[idx] == 0.0 && idx > 0) --idx;
    out.push_back(idx);
    ++visits.counts[idx];
  }
  return out;
}

}  // namespace cole
