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


// Per-case solve loop: prompt, n completions, extraction, validation, proof,
// and feedback retries under an n(r+1) candidate budget.

#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pragmasmith/benchgen.hpp"
#include "pragmasmith/candidate.hpp"
#include "pragmasmith/llm_gateway.hpp"
#include "pragmasmith/promptkit.hpp"
#include "pragmasmith/prover.hpp"

namespace pragmasmith {

struct RunConfig {
  int n = 6;
  int r = 1;
  PromptMode mode;
  std::string modelId = "gpt-4o";
  double temperature = 1.0;
  /// Concurrent prover runs within one attempt.
  int proverWidth = 1;
  /// Cases solved concurrently.
  int caseWidth = 1;
  std::string label;
  std::optional<std::string> systemOverride;
};

/// Error(Config) unless n >= 1, r >= 0 and both widths are positive.
void validateConfig(const RunConfig& config);

int maxCandidates(const RunConfig& config);

struct CandidateRecord {
  int completionIndex = 0;
  std::string response;
  /// nullopt when the response held no code.
  std::optional<Candidate> candidate;
  std::optional<ValidationResult> validation;
  std::optional<ProofReport> proof;
  std::string proverError;

  bool verified() const { return proof && proof->verified(); }
};

struct AttemptRecord {
  int attemptIndex = 0;
  PromptBundle prompt;
  std::vector<CandidateRecord> candidates;
  std::string providerError;
};

struct CaseOutcome {
  std::string caseId;
  bool solved = false;
  std::optional<CandidateOrigin> solvingCandidate;
  std::vector<AttemptRecord> attempts;
  int candidatesUsed = 0;
  double wallTime = 0.0;
  /// Unsolved with at least one prover run that timed out or crashed.
  bool unresolved = false;
};

/// Failed candidate to feed back: the accepted-but-unverified one with the
/// fewest mediums (earliest on ties), else the first extractable one, else
/// the mutated body with the baseline diagnostics.
RetryContext selectRetryContext(const AttemptRecord& attempt, const BenchmarkCase& benchmarkCase);

/// Seconds since an arbitrary origin.
using Clock = std::function<double()>;
Clock steadyClock();
Clock frozenClock();

class Orchestrator {
 public:
  Orchestrator(RunConfig config, ChatProvider& provider, Prover& prover,
               Clock clock = steadyClock());

  CaseOutcome solveCase(const BenchmarkCase& benchmarkCase);

  /// Solves every case (concurrently up to caseWidth); outcomes keep case order.
  std::vector<CaseOutcome> run(const std::vector<BenchmarkCase>& cases);

  const RunConfig& config() const { return config_; }

 private:
  void proveAll(const BenchmarkCase& benchmarkCase, std::vector<CandidateRecord*>& pending);

  RunConfig config_;
  ChatProvider& provider_;
  Prover& prover_;
  Clock clock_;
};

/// Outcome log lines (JSON objects) in event order.
nlohmann::json runStartedEvent(const RunConfig& config);
std::vector<nlohmann::json> outcomeEvents(const CaseOutcome& outcome);

/// Full JSONL log for a run: run_started then every case's events.
std::string renderRunLog(const RunConfig& config, const std::vector<CaseOutcome>& outcomes);

/// Scripted provider that answers every prompt with the original body of the
/// case whose mutated body the prompt carries.
std::shared_ptr<ChatProvider> makeOracleProvider(const std::vector<BenchmarkCase>& cases);

}  // namespace pragmasmith
