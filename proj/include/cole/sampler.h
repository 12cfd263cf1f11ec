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

#ifndef COLE_SAMPLER_H_
#define COLE_SAMPLER_H_

#include <span>
#include <vector>

#include "cole/rng.h"

namespace cole {

// Per-position visit counts, parallel to the population order. The engine
// re-aligns them when strategies enter or leave the population.
struct VisitCounts {
  std::vector<long long> counts;
  long long Total() const;
};

// phi(u) + c * sqrt(sum_i N(i)) / (1 + N(u)).
std::vector<double> SucgScores(std::span<const double> phi,
                               const VisitCounts& visits, double c);

// `draws` i.i.d. positions with probability scores / sum(scores); every draw
// increments `visits`.
std::vector<int> SamplePartners(std::span<const double> scores, int draws,
                                Rng& rng, VisitCounts& visits);

}  // namespace cole

#endif  // COLE_SAMPLER_H_
