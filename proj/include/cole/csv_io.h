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

#ifndef COLE_CSV_IO_H_
#define COLE_CSV_IO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cole/environment.h"
#include "cole/game_graph.h"
#include "cole/sampler.h"
#include "cole/solvers.h"

namespace cole {

// Rows are generations, columns strategies by creation id. Cells hold the
// strategy's eta in that generation's preference graph, or nothing if the
// strategy was not in the population.
struct CentralityMatrix {
  std::vector<std::int64_t> column_ids;
  std::vector<int> generations;
  std::vector<std::vector<std::optional<double>>> cells;
  bool operator==(const CentralityMatrix&) const = default;
};

struct CrossPlayRow {
  std::int64_t id = 0;
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
  bool operator==(const CrossPlayRow&) const = default;
};

struct CrossPlayReport {
  std::vector<std::int64_t> probe_ids;
  std::vector<CrossPlayRow> rows;
  bool operator==(const CrossPlayReport&) const = default;
};

struct SolverRow {
  int id = 0;
  double sigma_hat = 0.0;
  double sigma = 0.0;
  std::optional<double> shapley;
  double phi = 0.0;
  bool operator==(const SolverRow&) const = default;
};

// Shortest decimal that parses back to the same double.
std::string FormatReal(double v);
// Strict: the whole field must be a finite number.
double ParseReal(const std::string& field);
std::vector<std::string> SplitCsvLine(const std::string& line);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

// `n=<count>` then n rows of n values.
std::string PayoffToCsv(const PayoffMatrix& payoff);
PayoffMatrix PayoffFromCsv(const std::string& text);

// `id,out_edge,in_degree,eta` per snapshot node.
std::string CentralityToCsv(const PreferenceGraph& graph,
                            const CentralityReport& centrality);

// `kind=<kind>,actions=<A>` then `id,birth_generation,first_round...,
// response_rows...` per strategy.
std::string PopulationToCsv(std::span<const Strategy> population,
                            GameKind kind);
std::vector<Strategy> PopulationFromCsv(const std::string& text,
                                        GameKind* kind = nullptr);

// `id,visits` per strategy.
std::string VisitsToCsv(std::span<const Strategy> population,
                        const VisitCounts& visits);
VisitCounts VisitsFromCsv(const std::string& text,
                          std::span<const Strategy> population);

std::string SolverTableToCsv(std::span<const SolverRow> rows);
std::vector<SolverRow> SolverTableFromCsv(const std::string& text);
std::vector<SolverRow> SolverTable(const SolverResult& result, SolverFlag flag);

std::string CentralityMatrixToCsv(const CentralityMatrix& matrix);
CentralityMatrix CentralityMatrixFromCsv(const std::string& text);

// `probes=<id;id;...>` then `id,min,mean,max`.
std::string CrossPlayToCsv(const CrossPlayReport& report);
CrossPlayReport CrossPlayFromCsv(const std::string& text);

}  // namespace cole

#endif  // COLE_CSV_IO_H_
