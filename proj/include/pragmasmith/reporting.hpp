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


// Aggregation of outcome logs into per-configuration and per-benchmark
// tallies, rendered as an aligned table, CSV or plot data.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pragmasmith/benchgen.hpp"
#include "pragmasmith/candidate.hpp"
#include "pragmasmith/orchestrator.hpp"

namespace pragmasmith {

struct OutcomeSummary {
  std::string caseId;
  bool solved = false;
  bool unresolved = false;
  int candidatesUsed = 0;
  std::optional<CandidateOrigin> solvingCandidate;
};

struct RunLog {
  int n = 1;
  int r = 0;
  std::string label;
  std::vector<OutcomeSummary> outcomes;
};

/// Reads a JSONL outcome log (run_started plus case_concluded events).
RunLog parseRunLog(std::string_view jsonl);
RunLog summarizeRun(const RunConfig& config, const std::vector<CaseOutcome>& outcomes);

struct Tally {
  int solved = 0;
  int total = 0;
  bool operator==(const Tally&) const = default;
};

struct ConfigKey {
  int n = 1;
  int r = 0;
  std::string label;
  auto operator<=>(const ConfigKey&) const = default;
  std::string display() const;
};

struct ConfigResult {
  ConfigKey key;
  /// Indexed like RunReport::benchmarks.
  std::vector<Tally> perBenchmark;
  int solved = 0;
  /// Cases solved within the first k candidates, k = 1 .. n(r+1).
  std::vector<int> solvedByCandidates;
  /// Cases solved by attempt j, j = 0 .. r.
  std::vector<int> solvedByAttempt;
};

struct RunReport {
  /// Benchmark titles in table column order.
  std::vector<std::string> benchmarks;
  /// Cases solved by any configuration.
  std::vector<Tally> perBenchmark;
  std::vector<ConfigResult> perConfig;
  Tally totals;
  double rate = 0.0;
  /// Unsolved cases whose prover runs did not finish.
  std::vector<std::string> unresolvedCases;
};

/// Table column order of the schemata.
const std::vector<Schema>& reportSchemaOrder();

/// Error(UnknownCase) if a log names a case absent from the manifest.
RunReport aggregate(const std::vector<RunLog>& logs, const Manifest& manifest);

/// Percentage rounded to one decimal.
double ratePercent(int solved, int total);

enum class ReportFormat { Table, Csv, PlotData };
std::optional<ReportFormat> reportFormatFromName(std::string_view name);

std::string render(const RunReport& report, ReportFormat format);

}  // namespace pragmasmith
