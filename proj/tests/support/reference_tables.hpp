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


// Synthetic outcome logs that reproduce the reference per-configuration
// counts over a 71-case manifest.

#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "pragmasmith/reporting.hpp"

namespace pragmasmith::testing {

// Column order: All pragmas, Last invariant all loops, One assert,
// All pragmas one loop, Last invariant one loop.
inline constexpr std::array<int, 5> kBenchmarkSizes = {14, 12, 7, 16, 22};
inline constexpr std::array<int, 5> kUnionSolved = {5, 6, 7, 4, 14};

struct ReferenceRow {
  int n;
  int r;
  std::array<int, 5> solved;
  int sum;
};

inline const std::vector<ReferenceRow>& referenceRows() {
  static const std::vector<ReferenceRow> rows{
      {12, 0, {3, 4, 5, 2, 6}, 20}, {6, 1, {2, 3, 6, 1, 12}, 24}, {4, 2, {3, 4, 7, 3, 7}, 24},
      {3, 3, {2, 4, 7, 0, 7}, 20},  {2, 5, {2, 4, 6, 0, 6}, 18},
  };
  return rows;
}

inline std::string syntheticCaseId(size_t column, int index) {
  return "bench" + std::to_string(column) + "/" + std::to_string(index);
}

inline Manifest syntheticManifest() {
  Manifest m;
  const std::vector<Schema>& order = reportSchemaOrder();
  for (size_t b = 0; b < order.size(); ++b) {
    for (int i = 0; i < kBenchmarkSizes[b]; ++i) {
      BenchmarkCase c;
      c.caseId = syntheticCaseId(b, i);
      c.schema = order[b];
      m.cases.push_back(c);
    }
  }
  return m;
}

// Config k solves cases (start_k + j) mod U_b for j < s_k, with start_k the
// running total of earlier rows, so the union per benchmark is the first U_b
// cases. Every case id appears once per log; `seed` varies the solving
// candidate.
inline std::vector<RunLog> syntheticLogs(unsigned seed = 0) {
  std::vector<RunLog> logs;
  std::array<int, 5> start{};
  for (const ReferenceRow& row : referenceRows()) {
    RunLog log{row.n, row.r, "", {}};
    int budget = row.n * (row.r + 1);
    for (size_t b = 0; b < kBenchmarkSizes.size(); ++b) {
      std::vector<bool> solved(kBenchmarkSizes[b], false);
      for (int j = 0; j < row.solved[b]; ++j) solved[(start[b] + j) % kUnionSolved[b]] = true;
      start[b] += row.solved[b];
      for (int i = 0; i < kBenchmarkSizes[b]; ++i) {
        OutcomeSummary s;
        s.caseId = syntheticCaseId(b, i);
        s.solved = solved[i];
        if (s.solved) {
          int used = 1 + static_cast<int>((seed * 7u + b * 5u + i * 3u) % static_cast<unsigned>(budget));
          s.candidatesUsed = used;
          s.solvingCandidate = CandidateOrigin{(used - 1) / row.n, (used - 1) % row.n};
        } else {
          s.candidatesUsed = budget;
        }
        log.outcomes.push_back(s);
      }
    }
    logs.push_back(std::move(log));
  }
  return logs;
}

}  // namespace pragmasmith::testing
