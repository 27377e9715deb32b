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


// Command-line front end: gen-bench, run, report, record, replay-verify.

#include <filesystem>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"
#include "pragmasmith/benchgen.hpp"
#include "pragmasmith/common.hpp"
#include "pragmasmith/llm_gateway.hpp"
#include "pragmasmith/orchestrator.hpp"
#include "pragmasmith/reporting.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace pragmasmith;

namespace {

struct ProverOptions {
  std::string backend = "subprocess";
  std::string cassette;
  std::string executable = "gnatprove";
  std::string mode = "all";
  int level = -1;
  int steps = -1;
  int timeoutSecs = 300;

  void attach(CLI::App* cmd, bool withBackend = true) {
    if (withBackend) {
      cmd->add_option("--prover", backend, "Prover backend")
          ->check(CLI::IsMember({"subprocess", "replay"}));
    }
    cmd->add_option("--cassette", cassette, "Prover cassette (replay source or recording target)");
    cmd->add_option("--gnatprove", executable, "GNATprove executable");
    cmd->add_option("--prover-mode", mode, "GNATprove --mode value");
    cmd->add_option("--level", level, "GNATprove --level value");
    cmd->add_option("--steps", steps, "GNATprove --steps value");
    cmd->add_option("--timeout-secs", timeoutSecs, "Wall-clock limit per prover run")
        ->check(CLI::PositiveNumber);
  }

  ProverHandle handle() const {
    ProverHandle h;
    h.backend = backend == "replay" ? ProverBackend::Replay : ProverBackend::Subprocess;
    h.settings.mode = mode;
    if (level >= 0) h.settings.level = level;
    if (steps >= 0) h.settings.steps = steps;
    h.settings.timeoutSeconds = timeoutSecs;
    if (!cassette.empty()) h.cassette = fs::path(cassette);
    h.executable = executable;
    return h;
  }
};

struct RunOptions {
  std::string manifest;
  int n = 6;
  int retries = 1;
  std::string prompt = "base";
  bool mediumInPrompt = false;
  std::string provider = "http";
  std::string model = "gpt-4o";
  double temperature = 1.0;
  std::string endpoint = "https://api.openai.com/v1";
  std::string apiKeyEnv = "OPENAI_API_KEY";
  std::string llmCassette;
  std::string script;
  std::string systemMessage;
  std::string label;
  std::string out = ".";
  int caseWidth = 1;
  int proverWidth = 1;
  std::vector<std::string> caseIds;
  ProverOptions prover;

  void attach(CLI::App* cmd, const std::string& defaultProvider) {
    provider = defaultProvider;
    cmd->add_option("--manifest", manifest, "Benchmark manifest")->required();
    cmd->add_option("--n", n, "Completions per prompt")->check(CLI::PositiveNumber);
    cmd->add_option("--retries", retries, "Feedback retries after the first attempt")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--prompt", prompt, "Prompt variant")->check(CLI::IsMember({"base", "cot"}));
    cmd->add_flag("--medium-in-prompt", mediumInPrompt, "Embed baseline mediums in the prompt");
    cmd->add_option("--provider", provider, "Completion provider")
        ->check(CLI::IsMember({"http", "scripted", "replay", "oracle"}));
    cmd->add_option("--model", model, "Model id");
    cmd->add_option("--temperature", temperature, "Sampling temperature")->check(CLI::NonNegativeNumber);
    cmd->add_option("--endpoint", endpoint, "Chat-completions base URL");
    cmd->add_option("--api-key-env", apiKeyEnv, "Environment variable holding the API key");
    cmd->add_option("--llm-cassette", llmCassette, "Chat cassette (replay source or recording target)");
    cmd->add_option("--script", script, "JSON file of reply lists for the scripted provider");
    cmd->add_option("--system-message", systemMessage, "File replacing the default system message");
    cmd->add_option("--label", label, "Run label");
    cmd->add_option("--out", out, "Output directory");
    cmd->add_option("--case-width", caseWidth, "Cases solved concurrently")->check(CLI::PositiveNumber);
    cmd->add_option("--prover-width", proverWidth, "Concurrent prover runs per attempt")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--case", caseIds, "Restrict to these case ids");
    prover.attach(cmd);
  }

  RunConfig config() const {
    RunConfig c;
    c.n = n;
    c.r = retries;
    c.mode.variant = *promptVariantFromName(prompt);
    c.mode.mediumInPrompt = mediumInPrompt;
    c.modelId = model;
    c.temperature = temperature;
    c.caseWidth = caseWidth;
    c.proverWidth = proverWidth;
    c.label = label;
    if (!systemMessage.empty()) c.systemOverride = readFile(systemMessage);
    return c;
  }

  std::vector<BenchmarkCase> cases(const Manifest& m) const {
    if (caseIds.empty()) return m.cases;
    std::vector<BenchmarkCase> picked;
    for (const std::string& id : caseIds) {
      const BenchmarkCase* c = findCase(m, id);
      if (c == nullptr) throw Error(ErrorCode::UnknownCase, "no case " + id + " in " + manifest);
      picked.push_back(*c);
    }
    return picked;
  }

  std::shared_ptr<ChatProvider> makeProvider(const std::vector<BenchmarkCase>& cases,
                                             bool recording) const {
    std::shared_ptr<ChatProvider> p;
    if (provider == "http") {
      HttpProviderConfig cfg;
      cfg.baseUrl = endpoint;
      cfg.apiKeyEnv = apiKeyEnv;
      p = std::make_shared<HttpProvider>(cfg);
    } else if (provider == "oracle") {
      p = makeOracleProvider(cases);
    } else if (provider == "scripted") {
      if (script.empty()) throw Error(ErrorCode::Config, "--provider scripted needs --script");
      json doc = json::parse(readFile(script));
      p = std::make_shared<ScriptedProvider>(doc.get<std::vector<std::vector<std::string>>>());
    } else {
      if (llmCassette.empty()) throw Error(ErrorCode::Config, "--provider replay needs --llm-cassette");
      return std::make_shared<ReplayProvider>(
          std::make_shared<const ChatCassette>(ChatCassette::load(llmCassette)));
    }
    if (recording && !llmCassette.empty()) p = std::make_shared<RecordingProvider>(p, llmCassette);
    return p;
  }
};

void printSummary(const std::vector<CaseOutcome>& outcomes) {
  int solved = 0;
  int used = 0;
  for (const CaseOutcome& o : outcomes) {
    solved += o.solved ? 1 : 0;
    used += o.candidatesUsed;
  }
  std::cout << "solved " << solved << "/" << outcomes.size() << " cases using " << used
            << " candidates\n";
}

int genBench(const std::string& corpus, const std::vector<std::string>& schemaNames,
             const std::string& out, const ProverOptions& options) {
  std::vector<Schema> schemata;
  for (const std::string& name : schemaNames) {
    auto s = schemaFromName(name);
    if (!s) throw Error(ErrorCode::Config, "unknown schema " + name);
    schemata.push_back(*s);
  }
  if (schemata.empty()) schemata.assign(kAllSchemata.begin(), kAllSchemata.end());

  std::unique_ptr<Prover> prover = makeProver(options.handle());
  std::vector<BenchmarkCase> accepted;
  for (const SparkProject& project : loadCorpus(corpus)) {
    for (Schema schema : schemata) {
      for (const CaseDraft& draft : enumerateCases(project, schema)) {
        FilterOutcome f = filterCase(draft, *prover);
        const char* status = f.status == FilterOutcome::Status::Accepted   ? "accepted"
                             : f.status == FilterOutcome::Status::Rejected ? "rejected"
                                                                           : "unresolved";
        std::cout << draft.caseId << ": " << status;
        if (!f.reason.empty()) std::cout << " (" << f.reason << ")";
        std::cout << "\n";
        if (f.accepted) accepted.push_back(std::move(*f.accepted));
      }
    }
  }
  emitManifest(accepted, out);
  std::cout << accepted.size() << " cases written to " << out << "\n";
  return 0;
}

int runCommand(const RunOptions& options) {
  Manifest manifest = loadManifest(options.manifest);
  std::vector<BenchmarkCase> cases = options.cases(manifest);
  RunConfig config = options.config();
  auto provider = options.makeProvider(cases, true);
  std::unique_ptr<Prover> prover = makeProver(options.prover.handle());
  Orchestrator orchestrator(config, *provider, *prover);
  std::vector<CaseOutcome> outcomes = orchestrator.run(cases);
  fs::path log = fs::path(options.out) / "outcomes.jsonl";
  writeFile(log, renderRunLog(config, outcomes));
  printSummary(outcomes);
  std::cout << "outcome log: " << log.string() << "\n";
  return 0;
}

int recordCommand(const RunOptions& options, bool proveOnly) {
  Manifest manifest = loadManifest(options.manifest);
  std::vector<BenchmarkCase> cases = options.cases(manifest);
  if (options.prover.cassette.empty()) throw Error(ErrorCode::Config, "record needs --cassette");
  ProverHandle handle = options.prover.handle();
  handle.backend = ProverBackend::Subprocess;
  std::unique_ptr<Prover> prover = makeProver(handle);
  // Baselines and oracle bodies, so hermetic runs can replay both.
  for (const BenchmarkCase& c : cases) {
    const std::string& target = c.project.targetBody;
    ProofReport baseline = prover->run(c.project, {{target, c.mutatedBody}});
    ProofReport oracle = prover->run(c.project, {{target, restoreOriginal(c)}});
    std::cout << c.caseId << ": baseline " << baseline.mediums() << " medium(s), oracle "
              << (oracle.verified() ? "verified" : "NOT verified") << "\n";
  }
  if (proveOnly) return 0;
  RunConfig config = options.config();
  auto provider = options.makeProvider(cases, true);
  Orchestrator orchestrator(config, *provider, *prover);
  std::vector<CaseOutcome> outcomes = orchestrator.run(cases);
  writeFile(fs::path(options.out) / "outcomes.jsonl", renderRunLog(config, outcomes));
  printSummary(outcomes);
  return 0;
}

int replayVerify(const RunOptions& options) {
  Manifest manifest = loadManifest(options.manifest);
  std::vector<BenchmarkCase> cases = options.cases(manifest);
  ProverHandle handle = options.prover.handle();
  handle.backend = ProverBackend::Replay;
  if (!handle.cassette) throw Error(ErrorCode::Config, "replay-verify needs --cassette");
  RunConfig config = options.config();

  std::vector<std::string> logs;
  std::vector<CaseOutcome> outcomes;
  for (int round = 0; round < 2; ++round) {
    auto provider = options.makeProvider(cases, false);
    std::unique_ptr<Prover> prover = makeProver(handle);
    Orchestrator orchestrator(config, *provider, *prover, frozenClock());
    outcomes = orchestrator.run(cases);
    logs.push_back(renderRunLog(config, outcomes));
  }
  fs::path log = fs::path(options.out) / "outcomes.jsonl";
  writeFile(log, logs.front());
  printSummary(outcomes);
  bool identical = logs[0] == logs[1];
  std::cout << "outcome logs " << (identical ? "identical" : "DIFFER") << " across two runs\n";
  std::cout << "outcome log: " << log.string() << "\n";
  return identical ? 0 : 1;
}

int reportCommand(const std::string& manifestPath, const std::vector<std::string>& logPaths,
                  const std::string& format, const std::string& out) {
  Manifest manifest = loadManifest(manifestPath, false);
  std::vector<RunLog> logs;
  for (const std::string& p : logPaths) logs.push_back(parseRunLog(readFile(p)));
  std::string text = render(aggregate(logs, manifest), *reportFormatFromName(format));
  if (out.empty()) {
    std::cout << text;
  } else {
    writeFile(out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Annotation-synthesis benchmark harness for SPARK programs"};
  app.require_subcommand(1);

  std::string corpus;
  std::vector<std::string> schemata;
  std::string manifestOut = "manifest.json";
  ProverOptions genProver;
  CLI::App* gen = app.add_subcommand("gen-bench", "Build a benchmark manifest from a corpus");
  gen->add_option("--corpus", corpus, "Corpus directory")->required();
  gen->add_option("--schema", schemata, "Schemata to apply (default: all)");
  gen->add_option("--out", manifestOut, "Manifest path");
  genProver.attach(gen);

  RunOptions runOptions;
  CLI::App* run = app.add_subcommand("run", "Solve the cases of a manifest");
  runOptions.attach(run, "http");

  RunOptions recordOptions;
  bool proveOnly = false;
  CLI::App* record = app.add_subcommand("record", "Record prover (and optionally chat) cassettes");
  recordOptions.attach(record, "oracle");
  record->add_flag("--prove-only", proveOnly, "Record baseline and oracle proofs only");

  RunOptions verifyOptions;
  CLI::App* verify = app.add_subcommand("replay-verify", "Hermetic run, twice, comparing logs");
  verifyOptions.attach(verify, "oracle");

  std::string reportManifest;
  std::vector<std::string> reportLogs;
  std::string reportFormat = "table";
  std::string reportOut;
  CLI::App* report = app.add_subcommand("report", "Aggregate outcome logs");
  report->add_option("--manifest", reportManifest, "Benchmark manifest")->required();
  report->add_option("--log", reportLogs, "Outcome logs")->required();
  report->add_option("--format", reportFormat, "Output format")
      ->check(CLI::IsMember({"table", "csv", "plotdata"}));
  report->add_option("--out", reportOut, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return genBench(corpus, schemata, manifestOut, genProver);
    if (run->parsed()) return runCommand(runOptions);
    if (record->parsed()) return recordCommand(recordOptions, proveOnly);
    if (verify->parsed()) return replayVerify(verifyOptions);
    if (report->parsed()) return reportCommand(reportManifest, reportLogs, reportFormat, reportOut);
  } catch (const Error& e) {
    std::cerr << "pragmasmith: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "pragmasmith: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
