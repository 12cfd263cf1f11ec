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

#ifndef COLE_ANALYSIS_H_
#define COLE_ANALYSIS_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cole/csv_io.h"
#include "cole/engine.h"
#include "cole/environment.h"
#include "cole/game_graph.h"

namespace cole {

// Largest eta among the k lowest-eta nodes (the whole graph if n < k).
double GroupMaxEta(const CentralityReport& centrality, int k);

// eta_{t+1} / eta_t for consecutive terms, skipping pairs with eta_t == 0.
std::vector<double> EtaRatios(std::span<const double> etas);

struct ConvergencePoint {
  int generation = 0;
  double group_max_eta = 0.0;
  // Transition from the previous generation was inside the hypothesis
  // (both generations met the rank condition) and was compared.
  bool checked = false;
  bool increased = false;
};

struct ConvergenceReport {
  std::vector<ConvergencePoint> points;
  bool monotone = true;
  std::vector<int> excluded;    // transitions dropped for a rank violation
  std::vector<int> violations;  // checked transitions where the max rose
  std::vector<double> eta_ratios;
};

// Offline check of the shrinking-group property and the ratio diagnostics
// on the stored snapshots. Generations with unusable snapshots are skipped.
ConvergenceReport ConvergenceMonitor(const GenerationTrace& trace, int k);

// Preference centrality of a snapshot's full graph.
CentralityReport SnapshotCentrality(const PayoffSnapshot& snapshot);

// Rank of the snapshot's newest (last) strategy, ties in its favour.
int NewStrategyRank(const PayoffSnapshot& snapshot);

// Fraction of usable generations whose new strategy ranked <= k.
double IncompatibilityVerdict(const GenerationTrace& trace, int k);

CentralityMatrix BuildCentralityMatrix(const GenerationTrace& trace);

struct AnalysisSummary {
  int generations = 0;
  int skipped = 0;
  double verdict = 0.0;
  bool ok = true;  // false when more than 10% of snapshots were skipped
};

// Writes centrality_matrix.csv, eta_series.csv, convergence.csv and
// summary.json into `out_dir`.
AnalysisSummary AnalyzeRun(const std::filesystem::path& run_dir,
                           const std::filesystem::path& out_dir, int k,
                           std::ostream* log = nullptr);

// The pure-convention probes: probe a always plays action a.
std::vector<Strategy> StubbornProbes(const StageGame& game);

// min / mean / max of EvaluatePair against every probe. Throws InvalidInput
// for an empty probe set or mismatched shapes.
CrossPlayReport CrossPlay(std::span<const Strategy> population,
                          std::span<const Strategy> probes,
                          const StageGame& game);

}  // namespace cole

#endif  // COLE_ANALYSIS_H_
