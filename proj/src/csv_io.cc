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

#include "cole/csv_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cole/errors.h"

namespace cole {
namespace {

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out.push_back(line);
  }
  return out;
}

std::int64_t ParseId(const std::string& field) {
  std::int64_t v = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw InvalidInput("expected an integer, got '" + field + "'");
  }
  return v;
}

// Value after `prefix=`; throws if the field does not start with it.
std::string After(const std::string& field, const std::string& prefix) {
  if (field.rfind(prefix + "=", 0) != 0) {
    throw InvalidInput("expected '" + prefix + "=...', got '" + field + "'");
  }
  return field.substr(prefix.size() + 1);
}

void ExpectHeader(const std::vector<std::string>& lines, std::size_t at,
                  const std::string& header) {
  if (lines.size() <= at || lines[at] != header) {
    throw InvalidInput("expected header '" + header + "'");
  }
}

}  // namespace

std::string FormatReal(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double ParseReal(const std::string& field) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = field.data() + field.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw InvalidInput("expected a finite number, got '" + field + "'");
  }
  return v;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(field);
      field.clear();
    } else if (ch != ' ' && ch != '\t') {
      field.push_back(ch);
    }
  }
  out.push_back(field);
  return out;
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

std::string PayoffToCsv(const PayoffMatrix& payoff) {
  std::string out = "n=" + std::to_string(payoff.size()) + "\n";
  for (int i = 0; i < payoff.size(); ++i) {
    for (int j = 0; j < payoff.size(); ++j) {
      if (j) out += ',';
      out += FormatReal(payoff(i, j));
    }
    out += '\n';
  }
  return out;
}

PayoffMatrix PayoffFromCsv(const std::string& text) {
  const auto lines = Lines(text);
  if (lines.empty()) throw InvalidInput("payoff CSV is empty");
  const std::int64_t n = ParseId(After(lines[0], "n"));
  if (n < 1) throw InvalidInput("payoff CSV declares n < 1");
  if (static_cast<std::int64_t>(lines.size()) - 1 != n) {
    throw InvalidInput("payoff CSV is not square: n=" + std::to_string(n) +
                       " but " + std::to_string(lines.size() - 1) + " rows");
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<double> row;
    for (const auto& f : SplitCsvLine(lines[i])) row.push_back(ParseReal(f));
    rows.push_back(std::move(row));
  }
  PayoffMatrix m = PayoffMatrix::FromRows(rows);
  if (m.IsExactlySymmetric()) m.MarkSymmetric();
  return m;
}

std::string CentralityToCsv(const PreferenceGraph& graph,
                            const CentralityReport& centrality) {
  std::string out = "id,out_edge,in_degree,eta\n";
  for (int i = 0; i < graph.size(); ++i) {
    out += std::to_string(i) + ',' + std::to_string(graph.out_edge[i]) + ',' +
           std::to_string(centrality.in_degree[i]) + ',' +
           FormatReal(centrality.eta[i]) + '\n';
  }
  return out;
}

std::string PopulationToCsv(std::span<const Strategy> population,
                            GameKind kind) {
  const int actions = population.empty() ? 0 : population.front().actions();
  std::string out = "kind=" + GameKindName(kind) +
                    ",actions=" + std::to_string(actions) + "\n";
  for (const auto& s : population) {
    out += std::to_string(s.id.value) + ',' + std::to_string(s.birth_generation);
    for (double p : s.Parameters()) out += ',' + FormatReal(p);
    out += '\n';
  }
  return out;
}

std::vector<Strategy> PopulationFromCsv(const std::string& text,
                                        GameKind* kind_out) {
  const auto lines = Lines(text);
  if (lines.empty()) throw InvalidInput("population CSV is empty");
  const auto header = SplitCsvLine(lines[0]);
  if (header.size() != 2) throw InvalidInput("bad population CSV header");
  const GameKind kind = ParseGameKind(After(header[0], "kind"));
  const std::int64_t actions = ParseId(After(header[1], "actions"));
  if (actions < 0) throw InvalidInput("negative action count");
  if (kind_out) *kind_out = kind;
  const std::size_t params =
      actions + (kind == GameKind::kTwoStage ? actions * actions : 0);
  std::vector<Strategy> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = SplitCsvLine(lines[i]);
    if (fields.size() != 2 + params) {
      throw InvalidInput("population row " + std::to_string(i) + " has " +
                         std::to_string(fields.size()) + " fields, expected " +
                         std::to_string(2 + params));
    }
    Strategy s;
    s.id = StrategyId{ParseId(fields[0])};
    s.birth_generation = static_cast<int>(ParseId(fields[1]));
    s.first_round.resize(actions);
    if (kind == GameKind::kTwoStage) s.response.resize(actions * actions);
    std::vector<double> p;
    for (std::size_t k = 2; k < fields.size(); ++k) p.push_back(ParseReal(fields[k]));
    s.SetParameters(p);
    out.push_back(std::move(s));
  }
  return out;
}

std::string VisitsToCsv(std::span<const Strategy> population,
                        const VisitCounts& visits) {
  if (visits.counts.size() != population.size()) {
    throw InvalidInput("visit counts do not match the population");
  }
  std::string out = "id,visits\n";
  for (std::size_t i = 0; i < population.size(); ++i) {
    out += std::to_string(population[i].id.value) + ',' +
           std::to_string(visits.counts[i]) + '\n';
  }
  return out;
}

VisitCounts VisitsFromCsv(const std::string& text,
                          std::span<const Strategy> population) {
  const auto lines = Lines(text);
  ExpectHeader(lines, 0, "id,visits");
  VisitCounts visits;
  visits.counts.assign(population.size(), 0);
  std::vector<bool> seen(population.size(), false);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = SplitCsvLine(lines[i]);
    if (f.size() != 2) throw InvalidInput("bad visits row");
    const std::int64_t id = ParseId(f[0]);
    std::size_t pos = 0;
    while (pos < population.size() && population[pos].id.value != id) ++pos;
    if (pos == population.size()) continue;  // evicted since the snapshot
    visits.counts[pos] = ParseId(f[1]);
    seen[pos] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      throw InvalidInput("visits CSV has no entry for strategy " +
                         std::to_string(population[i].id.value));
    }
  }
  return visits;
}

std::vector<SolverRow> SolverTable(const SolverResult& result, SolverFlag flag) {
  std::vector<SolverRow> rows;
  for (std::size_t i = 0; i < result.distribution.phi.size(); ++i) {
    SolverRow row;
    row.id = static_cast<int>(i);
    row.sigma_hat = result.weights.sigma_hat[i];
    row.sigma = result.weights.sigma[i];
    if (flag == SolverFlag::kShapley) row.shapley = result.raw[i];
    row.phi = result.distribution.phi[i];
    rows.push_back(row);
  }
  return rows;
}

std::string SolverTableToCsv(std::span<const SolverRow> rows) {
  std::string out = "id,sigma_hat,sigma,shapley,phi\n";
  for (const auto& r : rows) {
    out += std::to_string(r.id) + ',' + FormatReal(r.sigma_hat) + ',' +
           FormatReal(r.sigma) + ',' +
           (r.shapley ? FormatReal(*r.shapley) : std::string()) + ',' +
           FormatReal(r.phi) + '\n';
  }
  return out;
}

std::vector<SolverRow> SolverTableFromCsv(const std::string& text) {
  const auto lines = Lines(text);
  ExpectHeader(lines, 0, "id,sigma_hat,sigma,shapley,phi");
  std::vector<SolverRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = SplitCsvLine(lines[i]);
    if (f.size() != 5) throw InvalidInput("bad solver row");
    SolverRow r;
    r.id = static_cast<int>(ParseId(f[0]));
    r.sigma_hat = ParseReal(f[1]);
    r.sigma = ParseReal(f[2]);
    if (!f[3].empty()) r.shapley = ParseReal(f[3]);
    r.phi = ParseReal(f[4]);
    rows.push_back(r);
  }
  return rows;
}

std::string CentralityMatrixToCsv(const CentralityMatrix& matrix) {
  std::string out = "generation";
  for (auto id : matrix.column_ids) out += ",s" + std::to_string(id);
  out += '\n';
  for (std::size_t r = 0; r < matrix.generations.size(); ++r) {
    out += std::to_string(matrix.generations[r]);
    for (const auto& cell : matrix.cells[r]) {
      out += ',';
      if (cell) out += FormatReal(*cell);
    }
    out += '\n';
  }
  return out;
}

CentralityMatrix CentralityMatrixFromCsv(const std::string& text) {
  const auto lines = Lines(text);
  if (lines.empty()) throw InvalidInput("centrality matrix CSV is empty");
  const auto header = SplitCsvLine(lines[0]);
  if (header.empty() || header[0] != "generation") {
    throw InvalidInput("centrality matrix CSV must start with 'generation'");
  }
  CentralityMatrix m;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].empty() || header[c][0] != 's') {
      throw InvalidInput("bad centrality column '" + header[c] + "'");
    }
    m.column_ids.push_back(ParseId(header[c].substr(1)));
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = SplitCsvLine(lines[i]);
    if (f.size() != header.size()) throw InvalidInput("ragged centrality row");
    m.generations.push_back(static_cast<int>(ParseId(f[0])));
    std::vector<std::optional<double>> row;
    for (std::size_t c = 1; c < f.size(); ++c) {
      if (f[c].empty()) {
        row.push_back(std::nullopt);
      } else {
        row.push_back(ParseReal(f[c]));
      }
    }
    m.cells.push_back(std::move(row));
  }
  return m;
}

std::string CrossPlayToCsv(const CrossPlayReport& report) {
  std::string out = "probes=";
  for (std::size_t i = 0; i < report.probe_ids.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(report.probe_ids[i]);
  }
  out += "\nid,min,mean,max\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.id) + ',' + FormatReal(r.min) + ',' +
           FormatReal(r.mean) + ',' + FormatReal(r.max) + '\n';
  }
  return out;
}

CrossPlayReport CrossPlayFromCsv(const std::string& text) {
  const auto lines = Lines(text);
  if (lines.empty()) throw InvalidInput("cross-play CSV is empty");
  CrossPlayReport report;
  const std::string probes = After(lines[0], "probes");
  std::stringstream ss(probes);
  std::string item;
  while (std::getline(ss, item, ';')) report.probe_ids.push_back(ParseId(item));
  ExpectHeader(lines, 1, "id,min,mean,max");
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto f = SplitCsvLine(lines[i]);
    if (f.size() != 4) throw InvalidInput("bad cross-play row");
    report.rows.push_back(
        {ParseId(f[0]), ParseReal(f[1]), ParseReal(f[2]), ParseReal(f[3])});
  }
  return report;
}

}  // namespace cole
