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

#include "cole/analysis.h"

#include <algorithm>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include "cole/errors.h"
#include "json.hpp"

namespace cole {
namespace {

bool Usable(const PayoffSnapshot& s) {
  return s.payoff.size() >= 2 &&
         static_cast<int>(s.ids.size()) == s.payoff.size();
}

}  // namespace

double GroupMaxEta(const CentralityReport& centrality, int k) {
  if (k < 1) throw InvalidInput("group size k must be >= 1");
  std::vector<double> eta = centrality.eta;
  if (eta.empty()) throw InvalidInput("empty centrality report");
  std::sort(eta.begin(), eta.end());
  return eta[std::min<std::size_t>(k, eta.size()) - 1];
}

std::vector<double> EtaRatios(std::span<const double> etas) {
  std::vector<double> out;
  for (std::size_t t = 0; t + 1 < etas.size(); ++t) {
    if (etas[t] == 0.0) continue;
    out.push_back(etas[t + 1] / etas[t]);
  }
  return out;
}

CentralityReport SnapshotCentrality(const PayoffSnapshot& snapshot) {
  return PreferenceCentrality(
      BuildPreferenceGraph(BuildGameGraph(snapshot.payoff)));
}

int NewStrategyRank(const PayoffSnapshot& snapshot) {
  const auto c = SnapshotCentrality(snapshot);
  return PreferenceRank(c, snapshot.payoff.size() - 1);
}

ConvergenceReport ConvergenceMonitor(const GenerationTrace& trace, int k) {
  ConvergenceReport report;
  const std::size_t n = trace.records.size();
  std::vector<double> etas;
  bool have_previous = false;
  double previous_max = 0.0;
  bool previous_satisfied = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& record = trace.records[i];
    etas.push_back(record.eta);
    if (i >= trace.snapshots.size() || !Usable(trace.snapshots[i])) {
      have_previous = false;
      continue;
    }
    ConvergencePoint point;
    point.generation = record.generation;
    point.group_max_eta = GroupMaxEta(SnapshotCentrality(trace.snapshots[i]), k);
    if (have_previous) {
      if (previous_satisfied && record.rank_satisfied) {
        point.checked = true;
        point.increased = point.group_max_eta > previous_max;
        if (point.increased) {
          report.violations.push_back(record.generation);
          report.monotone = false;
        }
      } else {
        report.excluded.push_back(record.generation);
      }
    }
    report.points.push_back(point);
    have_previous = true;
    previous_max = point.group_max_eta;
    previous_satisfied = record.rank_satisfied;
  }
  report.eta_ratios = EtaRatios(etas);
  return report;
}

double IncompatibilityVerdict(const GenerationTrace& trace, int k) {
  int usable = 0;
  int preferred = 0;
  for (const auto& snap : trace.snapshots) {
    if (!Usable(snap)) continue;
    ++usable;
    if (NewStrategyRank(snap) <= k) ++preferred;
  }
  return usable == 0 ? 0.0 : static_cast<double>(preferred) / usable;
}

CentralityMatrix BuildCentralityMatrix(const GenerationTrace& trace) {
  CentralityMatrix m;
  std::set<std::int64_t> ids;
  for (const auto& snap : trace.snapshots) {
    if (!Usable(snap)) continue;
    for (const auto& id : snap.ids) ids.insert(id.value);
  }
  m.column_ids.assign(ids.begin(), ids.end());
  std::map<std::int64_t, std::size_t> column;
  for (std::size_t c = 0; c < m.column_ids.size(); ++c) {
    column[m.column_ids[c]] = c;
  }
  for (std::size_t i = 0; i < trace.snapshots.size(); ++i) {
    const auto& snap = trace.snapshots[i];
    if (!Usable(snap)) continue;
    const auto centrality = SnapshotCentrality(snap);
    std::vector<std::optional<double>> row(m.column_ids.size());
    for (std::size_t node = 0; node < snap.ids.size(); ++node) {
      row[column[snap.ids[node].value]] = centrality.eta[node];
    }
    m.generations.push_back(trace.records[i].generation);
    m.cells.push_back(std::move(row));
  }
  return m;
}

AnalysisSummary AnalyzeRun(const std::filesystem::path& run_dir,
                           const std::filesystem::path& out_dir, int k,
                           std::ostream* log) {
  const GenerationTrace trace = LoadTrace(run_dir);
  AnalysisSummary summary;
  summary.generations = static_cast<int>(trace.records.size());
  for (std::size_t i = 0; i < trace.snapshots.size(); ++i) {
    if (!Usable(trace.snapshots[i])) {
      ++summary.skipped;
      if (log) {
        *log << "warning: skipping generation " << trace.records[i].generation
             << ": snapshot missing or corrupt\n";
      }
    }
  }
  summary.ok = summary.skipped * 10 <= summary.generations;

  WriteTextFile(out_dir / "centrality_matrix.csv",
                CentralityMatrixToCsv(BuildCentralityMatrix(trace)));

  std::string series =
      "generation,new_id,eta,rank,recomputed_rank,rank_satisfied\n";
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& r = trace.records[i];
    const auto& snap = trace.snapshots[i];
    series += std::to_string(r.generation) + ',' +
              std::to_string(r.new_id.value) + ',' + FormatReal(r.eta) + ',' +
              std::to_string(r.rank) + ',' +
              (Usable(snap) ? std::to_string(NewStrategyRank(snap)) : "") +
              ',' + (r.rank_satisfied ? "1" : "0") + '\n';
  }
  WriteTextFile(out_dir / "eta_series.csv", series);

  const ConvergenceReport conv = ConvergenceMonitor(trace, k);
  std::string conv_csv = "generation,group_max_eta,checked,increased\n";
  for (const auto& p : conv.points) {
    conv_csv += std::to_string(p.generation) + ',' +
                FormatReal(p.group_max_eta) + ',' + (p.checked ? "1" : "0") +
                ',' + (p.increased ? "1" : "0") + '\n';
  }
  WriteTextFile(out_dir / "convergence.csv", conv_csv);

  summary.verdict = IncompatibilityVerdict(trace, k);
  nlohmann::ordered_json j;
  j["generations"] = summary.generations;
  j["skipped"] = summary.skipped;
  j["k"] = k;
  j["verdict_rank_le_k_fraction"] = summary.verdict;
  j["group_max_eta_monotone"] = conv.monotone;
  j["excluded_transitions"] = conv.excluded;
  j["violations"] = conv.violations;
  j["eta_ratios"] = conv.eta_ratios;
  WriteTextFile(out_dir / "summary.json", j.dump(2) + "\n");
  return summary;
}

std::vector<Strategy> StubbornProbes(const StageGame& game) {
  std::vector<Strategy> probes;
  for (int a = 0; a < game.actions; ++a) {
    Strategy s = StubbornStrategy(game, a);
    s.id = StrategyId{a};
    probes.push_back(std::move(s));
  }
  return probes;
}

CrossPlayReport CrossPlay(std::span<const Strategy> population,
                          std::span<const Strategy> probes,
                          const StageGame& game) {
  if (probes.empty()) throw InvalidInput("probe set is empty");
  for (const auto& s : population) CheckCompatible(s, game);
  for (const auto& s : probes) CheckCompatible(s, game);
  CrossPlayReport report;
  for (const auto& p : probes) report.probe_ids.push_back(p.id.value);
  for (const auto& s : population) {
    CrossPlayRow row;
    row.id = s.id.value;
    row.min = std::numeric_limits<double>::infinity();
    row.max = -std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (const auto& p : probes) {
      const double w = EvaluatePair(s, p, game, PairSeed(0, s.id, p.id));
      row.min = std::min(row.min, w);
      row.max = std::max(row.max, w);
      total += w;
    }
    row.mean = std::clamp(total / static_cast<double>(probes.size()), row.min,
                          row.max);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace cole
