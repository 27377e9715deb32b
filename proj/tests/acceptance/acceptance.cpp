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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ada_gen.hpp"
#include "fixtures.hpp"
#include "reference_tables.hpp"
#include "pragmasmith/ada_lex.hpp"
#include "pragmasmith/benchgen.hpp"
#include "pragmasmith/candidate.hpp"
#include "pragmasmith/common.hpp"
#include "pragmasmith/orchestrator.hpp"
#include "pragmasmith/project.hpp"
#include "pragmasmith/prover.hpp"
#include "pragmasmith/reporting.hpp"
#include "pragmasmith/subprocess.hpp"
#include "schema_oracle.hpp"

namespace fs = std::filesystem;
using namespace pragmasmith;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool ok = true;
  std::string detail;
};

// Records the first few failures and keeps counting.
class Checker {
 public:
  void expect(bool condition, const std::string& what) {
    if (condition) return;
    ++failures_;
    if (failures_ <= 5) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  Verdict verdict(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failure(s): " + messages_};
  }

 private:
  int failures_ = 0;
  std::string messages_;
};

double secondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fence(const std::string& body) { return "```ada\n" + body + "```"; }

std::string replaceOnce(std::string text, const std::string& from, const std::string& to) {
  size_t at = text.find(from);
  if (at == std::string::npos) throw std::runtime_error("fixture text not found: " + from);
  return text.replace(at, from.size(), to);
}

std::string replaceAll(std::string text, const std::string& from, const std::string& to) {
  for (size_t at = text.find(from); at != std::string::npos; at = text.find(from, at + to.size())) {
    text.replace(at, from.size(), to);
  }
  return text;
}

std::set<size_t> offsets(const CaseDraft& draft) {
  std::set<size_t> out;
  for (const RemovedSite& r : draft.removedSites) out.insert(r.site.span.begin);
  return out;
}

const BenchmarkCase& caseById(const Manifest& m, const std::string& id) {
  const BenchmarkCase* c = findCase(m, id);
  if (!c) throw std::runtime_error("no case " + id);
  return *c;
}

Verdict lexerRoundTrip() {
  Checker check;
  std::vector<fs::path> files = testing::corpusFiles();
  std::vector<std::string> texts;
  for (const fs::path& f : files) texts.push_back(readFile(f));
  auto start = Clock::now();
  for (size_t i = 0; i < files.size(); ++i) {
    check.expect(render(tokenize(texts[i])) == texts[i], files[i].filename().string());
  }
  double elapsed = secondsSince(start);

  std::set<std::string> programs;
  bool multiLinePragma = false;
  bool nestedLoop = false;
  for (size_t i = 0; i < files.size(); ++i) {
    programs.insert(files[i].parent_path().filename().string());
    if (files[i].extension() != ".adb") continue;
    StructureMap map = scanStructure(texts[i]);
    for (const PragmaSite& s : map.sites) {
      if (texts[i].substr(s.span.begin, s.span.size()).find('\n') != std::string::npos) multiLinePragma = true;
    }
    for (const LoopRegion& l : map.loops) nestedLoop = nestedLoop || l.depth > 0;
  }
  check.expect(programs.size() >= 3, "fewer than 3 programs");
  check.expect(files.size() >= 10, "fewer than 10 files");
  check.expect(multiLinePragma, "no multi-line pragma in corpus");
  check.expect(nestedLoop, "no nested loop in corpus");
  check.expect(elapsed < 1.0, "round trip took " + std::to_string(elapsed) + " s");
  std::ostringstream s;
  s << files.size() << " files from " << programs.size() << " programs byte-exact in " << elapsed << " s";
  return check.verdict(s.str());
}

Verdict schemaOracle() {
  Checker check;
  int compared = 0;
  for (const SparkProject& p : loadCorpus(testing::corpusDir())) {
    auto oracle = testing::oracleCases(readFile(p.root / p.targetBody));
    for (size_t k = 0; k < kAllSchemata.size(); ++k) {
      auto drafts = enumerateCases(p, kAllSchemata[k]);
      std::string where = p.name + "/" + std::string(schemaName(kAllSchemata[k]));
      check.expect(drafts.size() == oracle[k].size(), where + " case count");
      for (size_t i = 0; i < std::min(drafts.size(), oracle[k].size()); ++i) {
        check.expect(offsets(drafts[i]) == oracle[k][i], where + " sites of case " + std::to_string(i));
        ++compared;
      }
    }
  }
  SparkProject dn;
  for (const SparkProject& p : loadCorpus(testing::corpusDir())) {
    if (p.name == "double_number") dn = p;
  }
  auto all = enumerateCases(dn, Schema::AllPragmas);
  check.expect(all.size() == 1 && all[0].removedSites.size() == 2, "Double_Number AllPragmas is not 1 case of 2 sites");
  auto liol = enumerateCases(dn, Schema::LastInvariantOneLoop);
  check.expect(liol.size() == 1 && liol[0].removedSites.size() == 1 &&
                   liol[0].removedSites[0].text == "pragma Loop_Invariant (Count < X);",
               "Double_Number LastInvariantOneLoop is not the Count < X invariant");
  check.expect(enumerateCases(dn, Schema::OneAssert).empty(), "Double_Number OneAssert is not empty");
  return check.verdict(std::to_string(compared) + " cases match the brute-force enumerator; Double_Number counts 1/1/0");
}

using Tuple = std::tuple<Severity, std::string, int, int>;

Verdict diagnosticParser() {
  Checker check;
  constexpr Severity E = Severity::Error, M = Severity::Medium, W = Severity::Warning, I = Severity::Info;
  const std::map<std::string, std::vector<Tuple>> expected{
      {"legacy_double.txt",
       {{M, "double.adb", 6, 30}, {I, "double.adb", 6, 30}, {I, "double.adb", 7, 24}, {I, "double.adb", 8, 20},
        {M, "double.ads", 4, 14}}},
      {"mutated_double_number.txt", {{M, "double_number.adb", 6, 24}, {M, "double_number.ads", 5, 11}}},
      {"mixed_severities.txt",
       {{I, "search.adb", 6, 10}, {I, "search.adb", 6, 10}, {W, "search.adb", 15, 7}, {M, "search.adb", 19, 33},
        {M, "search.adb", 24, 10}, {M, "search.adb", 26, 19}, {I, "search.ads", 17, 14}}},
      {"compile_errors.txt", {{E, "grid.ads", 7, 41}, {E, "grid.ads", 7, 41}, {E, "util.ads", 3, 4}}},
      {"windows_crlf.txt",
       {{M, "C:\\work\\grid\\grid.adb", 10, 24}, {M, "C:\\work\\grid\\grid.ads", 12, 14},
        {I, "C:\\work\\grid\\grid.adb", 29, 25}}},
      {"flow_and_noise.txt",
       {{M, "grid.adb", 4, 7}, {W, "grid.adb", 17, 7}, {M, "sub/dir/grid.adb", 31, 13}, {I, "grid.adb", 33, 7}}},
  };
  for (const auto& [name, tuples] : expected) {
    std::vector<Tuple> got;
    for (const Diagnostic& d : parseDiagnostics(readFile(testing::fixturesDir() / "gnatprove" / name))) {
      got.emplace_back(d.severity, d.file, d.line, d.column);
    }
    check.expect(got == tuples, name);
  }
  std::mt19937 rng(2026);
  std::string noise = testing::randomText(rng, 1 << 20);
  try {
    parseDiagnostics(noise);
  } catch (const std::exception& e) {
    check.expect(false, std::string("random text: ") + e.what());
  }
  return check.verdict(std::to_string(expected.size()) +
                       " transcribed fixtures match (no live toolchain recording available); 1 MiB of noise parsed");
}

// Token-level reformatting that leaves the program unchanged.
std::string reformat(const std::string& body, int style) {
  std::string out;
  std::vector<Token> tokens = tokenize(body);
  for (size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    switch (style) {
      case 0:  // flatten: one space for every whitespace run and line break
        if (t.kind == TokenKind::Whitespace) {
          out += " ";
        } else if (t.kind == TokenKind::Newline) {
          out += (i > 0 && tokens[i - 1].kind == TokenKind::Comment) ? "\n" : " ";
        } else {
          out += t.text;
        }
        break;
      case 1: {  // upper-case words
        std::string text = t.text;
        if (t.kind == TokenKind::Identifier || t.kind == TokenKind::Keyword) {
          for (char& c : text) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        }
        out += text;
        break;
      }
      case 2:  // wider indentation and blank lines
        if (t.kind == TokenKind::Whitespace) {
          out += t.text + t.text;
        } else if (t.kind == TokenKind::Newline) {
          out += "\n\n";
        } else {
          out += t.text;
        }
        break;
      default:  // drop comments, add trailing ones
        if (t.kind == TokenKind::Comment) break;
        if (t.kind == TokenKind::Newline) out += "  -- reformatted";
        out += t.text;
        break;
    }
  }
  return out;
}

Verdict validatorSoundness(const Manifest& manifest) {
  Checker check;
  int oracles = 0;
  for (const SparkProject& p : loadCorpus(testing::corpusDir())) {
    for (Schema s : kAllSchemata) {
      for (const CaseDraft& d : enumerateCases(p, s)) {
        check.expect(validateDiff(d.mutatedBody, restoreOriginal(d)).accepted(), "oracle of " + d.caseId);
        ++oracles;
      }
    }
  }

  const BenchmarkCase& dn = caseById(manifest, "double_number/AllPragmas/0");
  const BenchmarkCase& grid = caseById(manifest, "grid/AllPragmas/0");
  const BenchmarkCase& search = caseById(manifest, "search/AllPragmas/0");
  struct Mutant {
    const BenchmarkCase* base;
    std::string kind;
    std::function<std::string(std::string)> edit;
  };
  auto once = [](std::string from, std::string to) {
    return [=](std::string s) { return replaceOnce(std::move(s), from, to); };
  };
  auto every = [](std::string from, std::string to) {
    return [=](std::string s) { return replaceAll(std::move(s), from, to); };
  };
  std::vector<Mutant> mutants{
      {&dn, "changed literal", once("Result := Result + 2;", "Result := Result + 4;")},
      {&dn, "changed literal", once("Count : Natural := 0;", "Count : Natural := 1;")},
      {&grid, "changed literal", once("(others => (others => 0))", "(others => (others => 1))")},
      {&search, "changed literal", once("return 0;", "return 1;")},
      {&dn, "deleted statement", once("      Count := Count + 1;\n", "")},
      {&grid, "deleted statement", once("            Sum := Sum + M (I, J);\n", "")},
      {&search, "deleted statement", once("         I := I + 1;\n", "")},
      {&search, "deleted statement", once("      Pos := A'First;\n", "")},
      {&dn, "renamed variable", every("Count", "Cnt")},
      {&grid, "renamed variable", every("Sum", "Acc")},
      {&search, "renamed variable", every("Key", "Target")},
      {&grid, "renamed variable", once("M (I, J) := C;", "M (I, J) := V;")},
      {&dn, "while-loop wrapper",
       once("      Result := Result + 2;\n",
            "      while Count < 0 loop\n         pragma Assert (False);\n      end loop;\n      Result := Result + 2;\n")},
      {&grid, "while-loop wrapper",
       once("            Sum := Sum + M (I, J);\n",
            "            while Sum < 0 loop pragma Assert (Sum < 0); end loop;\n            Sum := Sum + M (I, J);\n")},
      {&search, "while-loop wrapper",
       once("      return 0;\n", "      while Key > 0 loop pragma Loop_Invariant (Key > 0); end loop;\n      return 0;\n")},
      {&dn, "while-loop wrapper",
       once("      Result := Result + 2;\n", "      while Count < X loop\n      Result := Result + 2;\n      end loop;\n")},
      {&dn, "non-pragma insertion", once("      Count := Count + 1;\n", "      Result := Result + 0;\n      Count := Count + 1;\n")},
      {&grid, "non-pragma insertion", once("      return Sum;\n", "      null;\n      return Sum;\n")},
      {&search, "non-pragma insertion", once("      I : Index := A'First;\n", "      I : Index := A'First;\n      Extra : Integer := 0;\n")},
      {&grid, "non-pragma insertion", once("            M (I, J) := C;\n", "            M (I, J) := C;\n            M (I, J) := C;\n")},
  };
  int rejected = 0;
  for (size_t i = 0; i < mutants.size(); ++i) {
    const Mutant& m = mutants[i];
    std::string body = m.edit(restoreOriginal(*m.base));
    bool ok = !validateDiff(m.base->mutatedBody, body).accepted();
    check.expect(ok, "mutant " + std::to_string(i) + " (" + m.kind + ") accepted");
    rejected += ok;
  }

  int reformatted = 0;
  for (size_t i = 0; i < 10; ++i) {
    const BenchmarkCase& c = manifest.cases.at(i % manifest.cases.size());
    std::string body = reformat(restoreOriginal(c), static_cast<int>(i % 4));
    bool ok = validateDiff(c.mutatedBody, body).accepted();
    check.expect(ok, "reformatted oracle of " + c.caseId + " style " + std::to_string(i % 4) + " rejected");
    reformatted += ok;
  }
  return check.verdict(std::to_string(oracles) + " oracles accepted; " + std::to_string(rejected) + "/" +
                       std::to_string(mutants.size()) + " mutants rejected; " + std::to_string(reformatted) +
                       "/10 reformatted oracles accepted");
}

RunConfig configOf(int n, int r) {
  RunConfig c;
  c.n = n;
  c.r = r;
  return c;
}

Verdict budgetInvariant(const Manifest& manifest, Prover& prover) {
  Checker check;
  int runs = 0;
  for (auto [n, r] : std::vector<std::pair<int, int>>{{12, 0}, {6, 1}, {4, 2}, {3, 3}, {2, 5}}) {
    for (const BenchmarkCase& c : manifest.cases) {
      // Alternates prose with the unrepaired body: never verifies.
      ScriptedProvider never([&](const ChatRequest& req) {
        std::vector<std::string> replies;
        for (int i = 0; i < req.n; ++i) replies.push_back(i % 2 ? fence(c.mutatedBody) : "No idea.");
        return replies;
      });
      Orchestrator o(configOf(n, r), never, prover, frozenClock());
      CaseOutcome out = o.solveCase(c);
      check.expect(!out.solved && out.candidatesUsed == 12,
                   c.caseId + " (" + std::to_string(n) + "," + std::to_string(r) + ") used " +
                       std::to_string(out.candidatesUsed));
      ++runs;
    }
  }
  return check.verdict(std::to_string(runs) + " case runs over 5 configurations each used exactly 12 candidates");
}

int runCli(const std::string& args, std::string& output) {
  std::string command = std::string("\"") + PRAGMASMITH_CLI + "\" " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return -1;
  char buffer[4096];
  while (size_t got = fread(buffer, 1, sizeof buffer, pipe)) output.append(buffer, got);
  int status = pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict hermeticOracle(const Manifest& manifest) {
  Checker check;
  ScratchDir scratch("acceptance");
  std::string args = "replay-verify --manifest \"" + testing::fixtureManifest().string() + "\" --cassette \"" +
                     testing::fixtureCassette().string() + "\" --n 2 --retries 1 --provider oracle --out ";
  auto start = Clock::now();
  std::vector<std::string> logs;
  for (int round = 0; round < 2; ++round) {
    fs::path out = scratch.path() / ("run" + std::to_string(round));
    fs::create_directories(out);
    std::string output;
    int status = runCli(args + "\"" + out.string() + "\"", output);
    check.expect(status == 0, "replay-verify exited " + std::to_string(status) + ": " + output);
    logs.push_back(fs::exists(out / "outcomes.jsonl") ? readFile(out / "outcomes.jsonl") : "");
  }
  double elapsed = secondsSince(start);
  check.expect(!logs[0].empty() && logs[0] == logs[1], "outcome logs differ across invocations");
  RunLog log = parseRunLog(logs[0]);
  check.expect(log.outcomes.size() == manifest.cases.size(), "not every case was run");
  for (const OutcomeSummary& o : log.outcomes) {
    check.expect(o.solved && o.candidatesUsed == 1 && o.solvingCandidate == CandidateOrigin{0, 0},
                 o.caseId + " not solved by the first candidate");
  }
  check.expect(elapsed < 30.0, "took " + std::to_string(elapsed) + " s");
  std::ostringstream s;
  s << log.outcomes.size() << "/" << manifest.cases.size()
    << " cases solved at attempt 0 with 1 candidate; logs byte-identical; " << elapsed << " s";
  return check.verdict(s.str());
}

Verdict aggregationReproduction() {
  Checker check;
  RunReport report = aggregate(testing::syntheticLogs(), testing::syntheticManifest());
  std::vector<int> sums;
  for (const ConfigResult& c : report.perConfig) sums.push_back(c.solved);
  check.expect(sums == std::vector<int>{20, 24, 24, 20, 18}, "row sums differ");
  for (size_t k = 0; k < std::min(report.perConfig.size(), testing::referenceRows().size()); ++k) {
    const ConfigResult& c = report.perConfig[k];
    for (size_t b = 0; b < 5; ++b) {
      check.expect(c.perBenchmark[b].solved == testing::referenceRows()[k].solved[b],
                   c.key.display() + " column " + std::to_string(b));
    }
  }
  for (size_t b = 0; b < 5; ++b) {
    check.expect(report.perBenchmark[b].solved == testing::kUnionSolved[b], "union column " + std::to_string(b));
  }
  check.expect(report.totals.solved == 36 && report.totals.total == 71, "totals differ");
  std::string table = render(report, ReportFormat::Table);
  check.expect(table.find("36/71 (50.7%)") != std::string::npos, "rate line missing from table");
  std::ostringstream s;
  s << "row sums 20, 24, 24, 20, 18; totals " << report.totals.solved << "/" << report.totals.total << "; rate "
    << report.rate;
  return check.verdict(s.str());
}

// Independent statement of which failed candidate feeds the next prompt.
const CandidateRecord* expectedContext(const AttemptRecord& a) {
  const CandidateRecord* best = nullptr;
  for (const CandidateRecord& c : a.candidates) {
    if (!c.proof || !c.validation || !c.validation->accepted()) continue;
    if (!best || c.proof->mediums() < best->proof->mediums()) best = &c;
  }
  if (best) return best;
  for (const CandidateRecord& c : a.candidates) {
    if (c.candidate) return &c;
  }
  return nullptr;
}

Verdict retryContextProperty(const Manifest& manifest) {
  Checker check;
  ProverHandle handle;
  handle.executable = testing::fakeGnatprove().string();
  SubprocessProver prover(handle);
  std::mt19937 rng(8);
  int retries = 0;
  int mediums = 0;
  for (int scenario = 0; scenario < 10; ++scenario) {
    const BenchmarkCase& c = manifest.cases[rng() % manifest.cases.size()];
    int n = 1 + static_cast<int>(rng() % 3);
    int r = 1 + static_cast<int>(rng() % 2);
    std::mt19937 replyRng(rng());
    std::string original = restoreOriginal(c);
    // Replies restore a strict subset of the removed pragmas, or carry no code.
    ScriptedProvider partial([&](const ChatRequest& req) {
      std::vector<std::string> replies;
      for (int i = 0; i < req.n; ++i) {
        if (replyRng() % 4 == 0) {
          replies.push_back("Cannot help with that.");
          continue;
        }
        std::vector<Deletion> dropped;
        for (const Deletion& d : c.deletions) {
          if (replyRng() % 2) dropped.push_back(d);
        }
        if (dropped.empty()) dropped.push_back(c.deletions[replyRng() % c.deletions.size()]);
        replies.push_back(fence(applyDeletions(original, dropped)));
      }
      return replies;
    });
    Orchestrator o(configOf(n, r), partial, prover, frozenClock());
    CaseOutcome out = o.solveCase(c);
    std::string where = "scenario " + std::to_string(scenario) + " (" + c.caseId + ")";
    for (size_t j = 0; j + 1 < out.attempts.size(); ++j) {
      const std::string& prompt = out.attempts[j + 1].prompt.userPrompt;
      const CandidateRecord* prev = expectedContext(out.attempts[j]);
      std::string body = prev ? prev->candidate->body : c.mutatedBody;
      std::vector<Diagnostic> diags = prev ? (prev->proof ? prev->proof->diagnostics : std::vector<Diagnostic>{})
                                           : c.baseline.diagnostics;
      size_t marker = prompt.find("A previous attempt");
      check.expect(marker != std::string::npos, where + " retry prompt lacks the failed attempt");
      std::string tail = marker == std::string::npos ? "" : prompt.substr(marker);
      check.expect(tail.find(body) != std::string::npos, where + " retry prompt lacks the previous body");
      for (const Diagnostic& d : diags) {
        if (d.severity == Severity::Medium) {
          check.expect(tail.find(d.message) != std::string::npos, where + " missing medium: " + d.message);
          ++mediums;
        }
      }
      ++retries;
    }
  }
  check.expect(retries > 0 && mediums > 0, "no retry prompt with mediums was generated");
  return check.verdict(std::to_string(retries) + " retry prompts over 10 randomized scenarios carry the failed body and all " +
                       std::to_string(mediums) + " medium messages");
}

}  // namespace

int main() {
  Manifest manifest = loadManifest(testing::fixtureManifest());
  ReplayProver replay(ProverSettings{},
                      std::make_shared<const ProverCassette>(ProverCassette::load(testing::fixtureCassette())));
  std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"lexer round-trip", lexerRoundTrip},
      {"schema oracle", schemaOracle},
      {"diagnostic parser", diagnosticParser},
      {"validator soundness", [&] { return validatorSoundness(manifest); }},
      {"budget invariant", [&] { return budgetInvariant(manifest, replay); }},
      {"hermetic end-to-end oracle", [&] { return hermeticOracle(manifest); }},
      {"aggregation reproduction", aggregationReproduction},
      {"retry-context property", [&] { return retryContextProperty(manifest); }},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.ok;
    std::cout << (v.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << " " << criteria[i].first << ": " << v.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
