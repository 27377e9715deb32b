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


#include "pragmasmith/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <future>
#include <thread>

#include "pragmasmith/common.hpp"
#include "pragmasmith/serialize.hpp"

using json = nlohmann::json;

namespace pragmasmith {
namespace {

// Errors that would recur for every case; the run stops instead of burning
// through the corpus.
bool isFatal(ErrorCode code) {
  return code == ErrorCode::Config || code == ErrorCode::PreconditionViolation ||
         code == ErrorCode::CapExceeded || code == ErrorCode::AuthError ||
         code == ErrorCode::ToolNotFound;
}

std::string withNewline(std::string text) {
  if (text.empty() || text.back() != '\n') text += '\n';
  return text;
}

bool isAccepted(const CandidateRecord& c) { return c.validation && c.validation->accepted(); }

json originJson(const CandidateOrigin& o) {
  return json{{"attempt", o.attemptIndex}, {"completion", o.completionIndex}};
}

}  // namespace

void validateConfig(const RunConfig& config) {
  if (config.n < 1) throw Error(ErrorCode::Config, "n must be at least 1");
  if (config.r < 0) throw Error(ErrorCode::Config, "retries must be non-negative");
  if (config.proverWidth < 1 || config.caseWidth < 1) {
    throw Error(ErrorCode::Config, "concurrency widths must be positive");
  }
  if (!(config.temperature >= 0.0)) throw Error(ErrorCode::Config, "temperature must be non-negative");
}

int maxCandidates(const RunConfig& config) {
  validateConfig(config);
  return config.n * (config.r + 1);
}

RetryContext selectRetryContext(const AttemptRecord& attempt, const BenchmarkCase& benchmarkCase) {
  const CandidateRecord* best = nullptr;
  for (const CandidateRecord& c : attempt.candidates) {
    if (!isAccepted(c) || !c.proof || c.proof->verified()) continue;
    if (best == nullptr || c.proof->mediums() < best->proof->mediums()) best = &c;
  }
  if (best != nullptr) {
    RetryContext ctx{best->candidate->body, best->proof->diagnostics, ""};
    if (best->proof->unresolved) ctx.note = "GNATprove did not finish on this attempt.";
    return ctx;
  }
  for (const CandidateRecord& c : attempt.candidates) {
    if (!c.candidate) continue;
    RetryContext ctx{c.candidate->body, {}, ""};
    if (c.validation && !c.validation->accepted() && !c.validation->violations.empty()) {
      ctx.note = "It was rejected because it changes more than annotations: " +
                 c.validation->violations.front().reason + ".";
    }
    return ctx;
  }
  return RetryContext{benchmarkCase.mutatedBody, benchmarkCase.baseline.diagnostics, ""};
}

Clock steadyClock() {
  return [] {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
  };
}

Clock frozenClock() {
  return [] { return 0.0; };
}

Orchestrator::Orchestrator(RunConfig config, ChatProvider& provider, Prover& prover, Clock clock)
    : config_(std::move(config)), provider_(provider), prover_(prover), clock_(std::move(clock)) {
  validateConfig(config_);
}

void Orchestrator::proveAll(const BenchmarkCase& benchmarkCase,
                            std::vector<CandidateRecord*>& pending) {
  auto prove = [&](CandidateRecord* c) {
    Overlay overlay{{benchmarkCase.project.targetBody, withNewline(c->candidate->body)}};
    try {
      c->proof = prover_.run(benchmarkCase.project, overlay);
    } catch (const Error& e) {
      if (isFatal(e.code())) throw;
      c->proverError = e.what();
    }
  };
  if (pending.size() == 1) {
    prove(pending.front());
    return;
  }
  std::vector<std::future<void>> runs;
  for (CandidateRecord* c : pending) runs.push_back(std::async(std::launch::async, prove, c));
  for (auto& r : runs) r.get();
}

CaseOutcome Orchestrator::solveCase(const BenchmarkCase& benchmarkCase) {
  CaseOutcome outcome;
  outcome.caseId = benchmarkCase.caseId;
  const double start = clock_();
  PromptMode mode = config_.mode;
  mode.retryContext.reset();
  bool sawUnresolved = false;

  for (int a = 0; a <= config_.r && !outcome.solved; ++a) {
    AttemptRecord attempt;
    attempt.attemptIndex = a;
    attempt.prompt = buildPrompt(benchmarkCase, mode, a, config_.systemOverride);

    ChatRequest request{attempt.prompt.systemMessage, attempt.prompt.userPrompt, config_.n,
                        config_.temperature, config_.modelId};
    std::vector<std::string> completions;
    try {
      completions = provider_.complete(request).completions;
    } catch (const Error& e) {
      if (isFatal(e.code())) throw;
      attempt.providerError = e.what();
    }
    if (completions.size() > static_cast<size_t>(config_.n)) completions.resize(config_.n);

    for (size_t i = 0; i < completions.size(); ++i) {
      CandidateRecord c;
      c.completionIndex = static_cast<int>(i);
      c.response = std::move(completions[i]);
      c.candidate = extractCode(c.response, CandidateOrigin{a, c.completionIndex});
      if (c.candidate) c.validation = validateDiff(benchmarkCase.mutatedBody, c.candidate->body);
      attempt.candidates.push_back(std::move(c));
    }

    // Proofs run in batches of proverWidth; results are consumed in
    // completion order so early stop behaves as if sequential.
    size_t i = 0;
    size_t kept = attempt.candidates.size();
    while (i < attempt.candidates.size() && !outcome.solved) {
      std::vector<CandidateRecord*> batch;
      for (size_t j = i; j < attempt.candidates.size() &&
                         batch.size() < static_cast<size_t>(config_.proverWidth);
           ++j) {
        if (isAccepted(attempt.candidates[j])) batch.push_back(&attempt.candidates[j]);
      }
      if (!batch.empty()) proveAll(benchmarkCase, batch);
      size_t end = batch.empty() ? attempt.candidates.size()
                                 : static_cast<size_t>(batch.back() - attempt.candidates.data()) + 1;
      for (; i < end; ++i) {
        CandidateRecord& c = attempt.candidates[i];
        ++outcome.candidatesUsed;
        if (c.proof && c.proof->unresolved) sawUnresolved = true;
        if (c.verified()) {
          outcome.solved = true;
          outcome.solvingCandidate = CandidateOrigin{a, c.completionIndex};
          kept = i + 1;
          ++i;
          break;
        }
      }
    }
    attempt.candidates.resize(kept);
    outcome.attempts.push_back(std::move(attempt));
    if (!outcome.solved && a < config_.r) {
      mode.retryContext = selectRetryContext(outcome.attempts.back(), benchmarkCase);
    }
  }
  outcome.unresolved = !outcome.solved && sawUnresolved;
  outcome.wallTime = clock_() - start;
  return outcome;
}

std::vector<CaseOutcome> Orchestrator::run(const std::vector<BenchmarkCase>& cases) {
  std::vector<CaseOutcome> outcomes(cases.size());
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  auto worker = [&] {
    for (size_t k = next++; k < cases.size(); k = next++) {
      try {
        outcomes[k] = solveCase(cases[k]);
      } catch (...) {
        std::lock_guard lock(failureMutex);
        if (!failure) failure = std::current_exception();
        next = cases.size();
      }
    }
  };
  size_t width = std::min(static_cast<size_t>(config_.caseWidth), std::max<size_t>(cases.size(), 1));
  std::vector<std::thread> threads;
  for (size_t t = 1; t < width; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return outcomes;
}

json runStartedEvent(const RunConfig& config) {
  return json{{"event", "run_started"},
              {"label", config.label},
              {"config",
               {{"n", config.n},
                {"r", config.r},
                {"max_candidates", maxCandidates(config)},
                {"prompt", promptVariantName(config.mode.variant)},
                {"medium_in_prompt", config.mode.mediumInPrompt},
                {"model", config.modelId},
                {"temperature", config.temperature},
                {"prover_width", config.proverWidth},
                {"system_message_override", config.systemOverride.has_value()},
                {"dependencies", "specs and non-target bodies"},
                {"retry_selection", "fewest mediums, earliest completion"},
                {"early_stop", "first verified candidate"}}}};
}

std::vector<json> outcomeEvents(const CaseOutcome& outcome) {
  std::vector<json> events;
  for (const AttemptRecord& a : outcome.attempts) {
    events.push_back(json{{"event", "prompt_built"},
                          {"case_id", outcome.caseId},
                          {"attempt", a.attemptIndex},
                          {"mode", a.prompt.provenance.mode},
                          {"system_sha256", sha256Hex(a.prompt.systemMessage)},
                          {"user_sha256", sha256Hex(a.prompt.userPrompt)},
                          {"user_chars", a.prompt.userPrompt.size()}});
    if (!a.providerError.empty()) {
      events.push_back(json{{"event", "provider_error"},
                            {"case_id", outcome.caseId},
                            {"attempt", a.attemptIndex},
                            {"error", a.providerError}});
    }
    for (const CandidateRecord& c : a.candidates) {
      json where{{"case_id", outcome.caseId}, {"attempt", a.attemptIndex}, {"completion", c.completionIndex}};
      json extracted = where;
      extracted["event"] = "candidate_extracted";
      extracted["found"] = c.candidate.has_value();
      extracted["response_sha256"] = sha256Hex(c.response);
      if (c.candidate) {
        extracted["extraction"] = extractionName(c.candidate->extraction);
        extracted["body_sha256"] = sha256Hex(c.candidate->body);
      }
      events.push_back(extracted);
      if (c.validation) {
        json v = where;
        v["event"] = "validation";
        v["verdict"] = c.validation->accepted() ? "accepted" : "rejected";
        v["inserted_regions"] = c.validation->insertedRegions.size();
        json reasons = json::array();
        for (const Violation& viol : c.validation->violations) reasons.push_back(viol.reason);
        v["violations"] = reasons;
        events.push_back(v);
      }
      if (c.proof) {
        json p = where;
        p["event"] = "proof";
        p["report_sha256"] = sha256Hex(reportToJson(*c.proof).dump());
        p["verified"] = c.proof->verified();
        p["errors"] = c.proof->errors();
        p["mediums"] = c.proof->mediums();
        p["unresolved"] = c.proof->unresolved;
        events.push_back(p);
      } else if (!c.proverError.empty()) {
        json p = where;
        p["event"] = "prover_error";
        p["error"] = c.proverError;
        events.push_back(p);
      }
    }
  }
  events.push_back(json{{"event", "case_concluded"},
                        {"case_id", outcome.caseId},
                        {"solved", outcome.solved},
                        {"solving_candidate",
                         outcome.solvingCandidate ? originJson(*outcome.solvingCandidate) : json()},
                        {"candidates_used", outcome.candidatesUsed},
                        {"attempts", outcome.attempts.size()},
                        {"unresolved", outcome.unresolved},
                        {"wall_time", outcome.wallTime}});
  return events;
}

std::string renderRunLog(const RunConfig& config, const std::vector<CaseOutcome>& outcomes) {
  std::string log = runStartedEvent(config).dump() + "\n";
  for (const CaseOutcome& o : outcomes) {
    for (const json& e : outcomeEvents(o)) log += e.dump() + "\n";
  }
  return log;
}

std::shared_ptr<ChatProvider> makeOracleProvider(const std::vector<BenchmarkCase>& cases) {
  std::vector<std::pair<std::string, std::string>> answers;
  for (const BenchmarkCase& c : cases) {
    std::string mutated = c.mutatedBody;
    while (!mutated.empty() && mutated.back() == '\n') mutated.pop_back();
    answers.emplace_back(mutated, "```ada\n" + withNewline(restoreOriginal(c)) + "```\n");
  }
  return std::make_shared<ScriptedProvider>([answers](const ChatRequest& request) {
    const std::string* reply = nullptr;
    size_t bestLength = 0;
    for (const auto& [mutated, answer] : answers) {
      if (mutated.size() >= bestLength && request.userPrompt.find(mutated) != std::string::npos) {
        reply = &answer;
        bestLength = mutated.size();
      }
    }
    if (reply == nullptr) throw Error(ErrorCode::UnknownCase, "oracle has no case for this prompt");
    return std::vector<std::string>(static_cast<size_t>(request.n), *reply);
  });
}

}  // namespace pragmasmith
