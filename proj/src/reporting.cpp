// Copyright 2026 The Pragmasmith Authors.
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


#include "pragmasmith/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pragmasmith/common.hpp"

using json = nlohmann::json;

namespace pragmasmith {
namespace {

std::string formatRate(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", rate);
  return buf;
}

std::string csvKey(const ConfigKey& k) {
  std::string key = "n" + std::to_string(k.n) + "r" + std::to_string(k.r);
  if (!k.label.empty()) key += "-" + k.label;
  return key;
}

std::string padRight(const std::string& s, size_t width) {
  return s + std::string(width > s.size() ? width - s.size() : 0, ' ');
}

struct Merged {
  ConfigKey key;
  std::map<std::string, bool> solved;
  std::map<std::string, int> solvedAt;      // candidates used when solved
  std::map<std::string, int> solvedAttempt;
};

}  // namespace

std::string ConfigKey::display() const {
  std::string s = "n=" + std::to_string(n) + ", r=" + std::to_string(r);
  if (!label.empty()) s += " [" + label + "]";
  return s;
}

RunLog parseRunLog(std::string_view jsonl) {
  RunLog log;
  bool started = false;
  std::istringstream in{std::string(jsonl)};
  int lineNo = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json e;
    try {
      e = json::parse(line);
    } catch (const json::exception& ex) {
      throw Error(ErrorCode::Io, "malformed outcome log line " + std::to_string(lineNo) + ": " + ex.what());
    }
    std::string kind = e.value("event", "");
    if (kind == "run_started") {
      log.n = e.at("config").at("n").get<int>();
      log.r = e.at("config").at("r").get<int>();
      log.label = e.value("label", "");
      started = true;
    } else if (kind == "case_concluded") {
      OutcomeSummary s;
      s.caseId = e.at("case_id").get<std::string>();
      s.solved = e.at("solved").get<bool>();
      s.unresolved = e.value("unresolved", false);
      s.candidatesUsed = e.value("candidates_used", 0);
      if (e.contains("solving_candidate") && e["solving_candidate"].is_object()) {
        s.solvingCandidate = CandidateOrigin{e["solving_candidate"].at("attempt").get<int>(),
                                             e["solving_candidate"].at("completion").get<int>()};
      }
      log.outcomes.push_back(std::move(s));
    }
  }
  if (!started) throw Error(ErrorCode::Io, "outcome log has no run_started event");
  return log;
}

RunLog summarizeRun(const RunConfig& config, const std::vector<CaseOutcome>& outcomes) {
  RunLog log{config.n, config.r, config.label, {}};
  for (const CaseOutcome& o : outcomes) {
    log.outcomes.push_back(
        OutcomeSummary{o.caseId, o.solved, o.unresolved, o.candidatesUsed, o.solvingCandidate});
  }
  return log;
}

const std::vector<Schema>& reportSchemaOrder() {
  static const std::vector<Schema> order{Schema::AllPragmas, Schema::LastInvariantAllLoops,
                                         Schema::OneAssert, Schema::AllPragmasOneLoop,
                                         Schema::LastInvariantOneLoop};
  return order;
}

double ratePercent(int solved, int total) {
  if (total <= 0) return 0.0;
  return std::round(1000.0 * solved / total) / 10.0;
}

RunReport aggregate(const std::vector<RunLog>& logs, const Manifest& manifest) {
  RunReport report;
  std::map<Schema, size_t> column;
  for (Schema s : reportSchemaOrder()) {
    column[s] = report.benchmarks.size();
    report.benchmarks.emplace_back(schemaTitle(s));
  }
  std::map<std::string, size_t> caseColumn;
  std::vector<int> sizes(report.benchmarks.size(), 0);
  for (const BenchmarkCase& c : manifest.cases) {
    caseColumn[c.caseId] = column.at(c.schema);
    ++sizes[column.at(c.schema)];
  }

  auto order = [](const ConfigKey& a, const ConfigKey& b) {
    return std::tie(a.r, a.n, a.label) < std::tie(b.r, b.n, b.label);
  };
  std::map<ConfigKey, Merged, decltype(order)> merged(order);
  std::set<std::string> anySolved;
  std::set<std::string> unresolved;
  for (const RunLog& log : logs) {
    ConfigKey key{log.n, log.r, log.label};
    Merged& m = merged[key];
    m.key = key;
    for (const OutcomeSummary& o : log.outcomes) {
      if (!caseColumn.count(o.caseId)) {
        throw Error(ErrorCode::UnknownCase, "outcome for unknown case " + o.caseId);
      }
      bool& s = m.solved[o.caseId];
      if (o.solved) {
        int used = o.candidatesUsed;
        int attempt = o.solvingCandidate ? o.solvingCandidate->attemptIndex : log.r;
        if (!s || used < m.solvedAt[o.caseId]) m.solvedAt[o.caseId] = used;
        if (!s || attempt < m.solvedAttempt[o.caseId]) m.solvedAttempt[o.caseId] = attempt;
        s = true;
        anySolved.insert(o.caseId);
      } else if (o.unresolved) {
        unresolved.insert(o.caseId);
      }
    }
  }

  for (auto& [key, m] : merged) {
    ConfigResult cr;
    cr.key = key;
    cr.perBenchmark.resize(report.benchmarks.size());
    for (size_t b = 0; b < sizes.size(); ++b) cr.perBenchmark[b].total = sizes[b];
    int budget = key.n * (key.r + 1);
    cr.solvedByCandidates.assign(static_cast<size_t>(std::max(budget, 0)), 0);
    cr.solvedByAttempt.assign(static_cast<size_t>(key.r + 1), 0);
    for (const auto& [id, solved] : m.solved) {
      if (!solved) continue;
      ++cr.perBenchmark[caseColumn.at(id)].solved;
      ++cr.solved;
      for (int k = std::max(m.solvedAt[id], 1); k <= budget; ++k) ++cr.solvedByCandidates[k - 1];
      for (int j = std::max(m.solvedAttempt[id], 0); j <= key.r; ++j) ++cr.solvedByAttempt[j];
    }
    report.perConfig.push_back(std::move(cr));
  }

  report.perBenchmark.resize(report.benchmarks.size());
  for (size_t b = 0; b < sizes.size(); ++b) report.perBenchmark[b].total = sizes[b];
  for (const std::string& id : anySolved) ++report.perBenchmark[caseColumn.at(id)].solved;
  for (const Tally& t : report.perBenchmark) {
    report.totals.solved += t.solved;
    report.totals.total += t.total;
  }
  report.rate = ratePercent(report.totals.solved, report.totals.total);
  for (const std::string& id : unresolved) {
    if (!anySolved.count(id)) report.unresolvedCases.push_back(id);
  }
  return report;
}

std::optional<ReportFormat> reportFormatFromName(std::string_view name) {
  if (name == "table") return ReportFormat::Table;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "plotdata") return ReportFormat::PlotData;
  return std::nullopt;
}

namespace {

std::string renderTable(const RunReport& report) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"Configuration"};
  header.insert(header.end(), report.benchmarks.begin(), report.benchmarks.end());
  header.push_back("Sum");
  rows.push_back(header);
  for (const ConfigResult& c : report.perConfig) {
    std::vector<std::string> row{c.key.display()};
    for (const Tally& t : c.perBenchmark) row.push_back(std::to_string(t.solved));
    row.push_back(std::to_string(c.solved));
    rows.push_back(row);
  }
  std::vector<std::string> solved{"Total solved"};
  std::vector<std::string> sizes{"Benchmark size"};
  for (const Tally& t : report.perBenchmark) {
    solved.push_back(std::to_string(t.solved));
    sizes.push_back(std::to_string(t.total));
  }
  solved.push_back(std::to_string(report.totals.solved));
  sizes.push_back(std::to_string(report.totals.total));
  rows.push_back(solved);
  rows.push_back(sizes);

  std::vector<size_t> widths(header.size(), 0);
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (size_t i = 0; i < row.size(); ++i) {
      line += i + 1 == row.size() ? row[i] : padRight(row[i], widths[i] + 2);
    }
    out += line + "\n";
  }
  out += "Solved " + std::to_string(report.totals.solved) + "/" + std::to_string(report.totals.total) +
         " (" + formatRate(report.rate) + "%)\n";
  if (!report.unresolvedCases.empty()) {
    out += "Unresolved (counted unsolved):";
    for (const std::string& id : report.unresolvedCases) out += " " + id;
    out += "\n";
  }
  return out;
}

std::string renderCsv(const RunReport& report) {
  std::string out = "config,n,r,benchmark,solved,total\n";
  for (const ConfigResult& c : report.perConfig) {
    for (size_t b = 0; b < report.benchmarks.size(); ++b) {
      out += csvKey(c.key) + "," + std::to_string(c.key.n) + "," + std::to_string(c.key.r) + "," +
             report.benchmarks[b] + "," + std::to_string(c.perBenchmark[b].solved) + "," +
             std::to_string(c.perBenchmark[b].total) + "\n";
    }
  }
  return out;
}

std::string renderPlotData(const RunReport& report) {
  std::string out = "# solved per benchmark and configuration (stacked bars)\n# config";
  for (const std::string& b : report.benchmarks) out += " \"" + b + "\"";
  out += "\n";
  for (const ConfigResult& c : report.perConfig) {
    out += "\"" + c.key.display() + "\"";
    for (const Tally& t : c.perBenchmark) out += " " + std::to_string(t.solved);
    out += "\n";
  }
  for (const ConfigResult& c : report.perConfig) {
    out += "\n\n# cumulative solved by candidates used: " + c.key.display() + "\n# candidates solved\n";
    for (size_t k = 0; k < c.solvedByCandidates.size(); ++k) {
      out += std::to_string(k + 1) + " " + std::to_string(c.solvedByCandidates[k]) + "\n";
    }
  }
  for (const ConfigResult& c : report.perConfig) {
    out += "\n\n# cumulative solved by attempt: " + c.key.display() + "\n# attempt solved\n";
    for (size_t j = 0; j < c.solvedByAttempt.size(); ++j) {
      out += std::to_string(j) + " " + std::to_string(c.solvedByAttempt[j]) + "\n";
    }
  }
  return out;
}

}  // namespace

std::string render(const RunReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Table: return renderTable(report);
    case ReportFormat::Csv: return renderCsv(report);
    case ReportFormat::PlotData: return renderPlotData(report);
  }
  return {};
}

}  // namespace pragmasmith
