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

#include "pragmasmith/prover.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <tuple>

#include "ada_gen.hpp"
#include "fixtures.hpp"
#include "pragmasmith/common.hpp"
#include "pragmasmith/subprocess.hpp"

namespace pragmasmith {
namespace {

namespace fs = std::filesystem;
using Tuple = std::tuple<Severity, std::string, int, int>;

std::vector<Tuple> tuples(const std::vector<Diagnostic>& diags) {
  std::vector<Tuple> out;
  for (const Diagnostic& d : diags) out.emplace_back(d.severity, d.file, d.line, d.column);
  return out;
}

std::vector<Diagnostic> parseFixture(const std::string& name) {
  return parseDiagnostics(readFile(testing::fixturesDir() / "gnatprove" / name));
}

constexpr Severity E = Severity::Error;
constexpr Severity M = Severity::Medium;
constexpr Severity W = Severity::Warning;
constexpr Severity I = Severity::Info;

TEST(ParseDiagnosticsTest, SpecExamples) {
  auto one = parseDiagnostics("double.adb:6:30: medium: loop invariant might fail in first iteration");
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(tuples(one), (std::vector<Tuple>{{M, "double.adb", 6, 30}}));
  EXPECT_EQ(one[0].message, "loop invariant might fail in first iteration");
  EXPECT_FALSE(one[0].counterexample);
  EXPECT_TRUE(parseDiagnostics("").empty());
  EXPECT_TRUE(parseDiagnostics("gprbuild: compilation of double.adb failed").empty());
}

TEST(ParseDiagnosticsTest, LegacyDoubleFixture) {
  EXPECT_EQ(tuples(parseFixture("legacy_double.txt")),
            (std::vector<Tuple>{{M, "double.adb", 6, 30},
                                {I, "double.adb", 6, 30},
                                {I, "double.adb", 7, 24},
                                {I, "double.adb", 8, 20},
                                {M, "double.ads", 4, 14}}));
}

TEST(ParseDiagnosticsTest, MutatedDoubleNumberFixture) {
  auto diags = parseFixture("mutated_double_number.txt");
  EXPECT_EQ(tuples(diags), (std::vector<Tuple>{{M, "double_number.adb", 6, 24},
                                               {M, "double_number.ads", 5, 11}}));
  ASSERT_TRUE(diags[0].counterexample);
  EXPECT_EQ(*diags[0].counterexample,
            "  6 |      Result := Result + 2;\n"
            "    |                       ^ here\n"
            "  e.g. when Result = Natural'Last\n"
            "  reason for check: result of addition must fit in a 32-bits machine integer");
  EXPECT_EQ(diags[1].message, "postcondition might fail, cannot prove Result = X * 2");
}

TEST(ParseDiagnosticsTest, MixedSeveritiesFixture) {
  auto diags = parseFixture("mixed_severities.txt");
  EXPECT_EQ(tuples(diags), (std::vector<Tuple>{{I, "search.adb", 6, 10},
                                               {I, "search.adb", 6, 10},
                                               {W, "search.adb", 15, 7},
                                               {M, "search.adb", 19, 33},
                                               {M, "search.adb", 24, 10},
                                               {M, "search.adb", 26, 19},
                                               {I, "search.ads", 17, 14}}));
  EXPECT_EQ(diags[2].message, "initialization of \"I\" has no effect [-gnatwr]");
  EXPECT_FALSE(diags[4].counterexample);
  ASSERT_TRUE(diags[5].counterexample);
  EXPECT_NE(diags[5].counterexample->find("possible fix"), std::string::npos);
}

TEST(ParseDiagnosticsTest, CompileErrorsFixture) {
  auto diags = parseFixture("compile_errors.txt");
  EXPECT_EQ(tuples(diags), (std::vector<Tuple>{{E, "grid.ads", 7, 41},
                                               {E, "grid.ads", 7, 41},
                                               {E, "util.ads", 3, 4}}));
  EXPECT_EQ(diags[2].message, "missing \";\"");
  // Continuation lines only attach to mediums.
  EXPECT_FALSE(diags[2].counterexample);
}

TEST(ParseDiagnosticsTest, WindowsPathsAndCrlfFixture) {
  auto diags = parseFixture("windows_crlf.txt");
  EXPECT_EQ(tuples(diags), (std::vector<Tuple>{{M, "C:\\work\\grid\\grid.adb", 10, 24},
                                               {M, "C:\\work\\grid\\grid.ads", 12, 14},
                                               {I, "C:\\work\\grid\\grid.adb", 29, 25}}));
  EXPECT_EQ(diags[0].message,
            "overflow check might fail, cannot prove upper bound for Sum + M (I, J)");
  EXPECT_EQ(diags[0].counterexample, "  e.g. when M = (others => (others => 1000))");
}

TEST(ParseDiagnosticsTest, FlowAndNoiseFixture) {
  auto diags = parseFixture("flow_and_noise.txt");
  EXPECT_EQ(tuples(diags), (std::vector<Tuple>{{M, "grid.adb", 4, 7},
                                               {W, "grid.adb", 17, 7},
                                               {M, "sub/dir/grid.adb", 31, 13},
                                               {I, "grid.adb", 33, 7}}));
  EXPECT_EQ(diags[2].counterexample, "  e.g. when I = 2\n  and K = 2");
}

TEST(ParseDiagnosticsTest, TotalOnRandomText) {
  std::mt19937 rng(7);
  std::string text = testing::randomText(rng, 1 << 20);
  std::vector<Diagnostic> diags;
  ASSERT_NO_THROW(diags = parseDiagnostics(text));
  for (const Diagnostic& d : diags) {
    EXPECT_GE(d.line, 1);
    EXPECT_GE(d.column, 1);
  }
}

TEST(ParseDiagnosticsTest, FindsPlantedLinesInNoise) {
  std::mt19937 rng(11);
  for (int round = 0; round < 50; ++round) {
    std::string text;
    std::vector<Tuple> expected;
    for (int k = 0; k < 20; ++k) {
      std::string noise = testing::randomText(rng, 40);
      for (char& c : noise) {
        if (c == '\n' || c == '\r') c = '.';
      }
      text += "#" + noise + "\n";
      if (rng() % 3 == 0) {
        static const char* names[] = {"error", "medium", "warning", "info"};
        int sev = static_cast<int>(rng() % 4);
        int line = static_cast<int>(rng() % 500) + 1;
        int col = static_cast<int>(rng() % 80) + 1;
        text += "f" + std::to_string(k) + ".adb:" + std::to_string(line) + ":" +
                std::to_string(col) + ": " + names[sev] + ": msg\n";
        expected.emplace_back(static_cast<Severity>(sev), "f" + std::to_string(k) + ".adb", line,
                              col);
      }
    }
    ProofReport report = makeReport(text, 0, 0.0, false);
    EXPECT_EQ(tuples(report.diagnostics), expected);
    EXPECT_EQ(report.errors() + report.mediums() + report.count(Severity::Warning) +
                  report.count(Severity::Info),
              report.diagnostics.size());
  }
}

TEST(ProofReportTest, VerifiedIffNoErrorsOrMediumsAfterNormalExit) {
  EXPECT_TRUE(makeReport("a.adb:1:1: info: proved\n", 0, 0, false).verified());
  EXPECT_TRUE(makeReport("a.adb:1:1: warning: unused\n", 0, 0, false).verified());
  EXPECT_FALSE(makeReport("a.adb:1:1: medium: x\n", 0, 0, false).verified());
  EXPECT_FALSE(makeReport("a.adb:1:1: error: x\n", 1, 0, false).verified());
  EXPECT_FALSE(makeReport("", 0, 0, true).verified());
}

TEST(ProofReportTest, UnresolvedRuns) {
  EXPECT_TRUE(makeReport("", 0, 300, true).unresolved);
  EXPECT_TRUE(makeReport("", 134, 0, false).unresolved);
  EXPECT_TRUE(makeReport("gnatprove: internal error\n", 1, 0, false).unresolved);
  EXPECT_FALSE(makeReport("a.adb:1:1: error: x\n", 1, 0, false).unresolved);
  EXPECT_FALSE(makeReport("a.adb:1:1: medium: x\n", 0, 0, false).unresolved);
}

class ProverTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = testing::copyProgram("double_number", scratch_.path());
    project_ = discoverProject(root_);
    handle_.executable = testing::fakeGnatprove().string();
  }

  Overlay mutated() const { return {{"double_number.adb", testing::kDoubleNumberMutated}}; }

  ScratchDir scratch_{"prover-test"};
  fs::path root_;
  SparkProject project_;
  ProverHandle handle_;
};

TEST_F(ProverTest, CommandLine) {
  handle_.settings.level = 2;
  handle_.settings.extraArgs = {"--report=all"};
  EXPECT_EQ(proverCommand(handle_, project_),
            (std::vector<std::string>{handle_.executable, "-P", "double_number.gpr", "--mode=all",
                                      "--level=2", "--report=all"}));
}

TEST_F(ProverTest, OriginalProjectVerifies) {
  ProofReport report = runProver(handle_, project_, {});
  EXPECT_TRUE(report.verified()) << report.rawOutput;
  EXPECT_EQ(report.mediums(), 0u);
}

TEST_F(ProverTest, MutatedDoubleNumberHasMediums) {
  std::string before = readFile(root_ / "double_number.adb");
  ProofReport report = runProver(handle_, project_, mutated());
  EXPECT_FALSE(report.verified());
  ASSERT_GE(report.mediums(), 1u);
  bool mentions = false;
  for (const Diagnostic& d : report.mediumDiagnostics()) {
    mentions |= d.message.find("postcondition") != std::string::npos ||
                d.message.find("overflow") != std::string::npos;
  }
  EXPECT_TRUE(mentions) << report.rawOutput;
  // The overlay never touches the project tree.
  EXPECT_EQ(readFile(root_ / "double_number.adb"), before);
}

TEST_F(ProverTest, BrokenDependencyYieldsErrors) {
  std::string spec = readFile(root_ / "double_number.ads");
  Overlay overlay{{"double_number.ads", spec.replace(spec.find("/ 2,"), 4, "/ 2")}};
  ProofReport report = runProver(handle_, project_, overlay);
  EXPECT_EQ(report.errors(), 1u);
  EXPECT_FALSE(report.unresolved);
  EXPECT_FALSE(report.verified());
}

TEST_F(ProverTest, OverlayOutsideProjectIsRejected) {
  Overlay overlay{{"../elsewhere.adb", "x"}};
  try {
    runProver(handle_, project_, overlay);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PreconditionViolation);
  }
}

TEST_F(ProverTest, MissingToolchain) {
  handle_.executable = "gnatprove-definitely-not-installed";
  try {
    runProver(handle_, project_, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ToolNotFound);
  }
}

TEST_F(ProverTest, TimeoutIsUnresolved) {
  setenv("FAKE_GNATPROVE_BEHAVIOR", "hang", 1);
  handle_.settings.timeoutSeconds = 1;
  ProofReport report = runProver(handle_, project_, {});
  unsetenv("FAKE_GNATPROVE_BEHAVIOR");
  EXPECT_TRUE(report.unresolved);
  EXPECT_FALSE(report.verified());
  EXPECT_LT(report.duration, 10.0);
}

TEST_F(ProverTest, CrashIsUnresolved) {
  setenv("FAKE_GNATPROVE_BEHAVIOR", "crash", 1);
  ProofReport report = runProver(handle_, project_, {});
  unsetenv("FAKE_GNATPROVE_BEHAVIOR");
  EXPECT_TRUE(report.unresolved);
}

TEST_F(ProverTest, DigestCoversSourcesAndSettingsButNotTimeout) {
  ProverSettings settings;
  std::string base = requestDigest(project_, {}, settings);
  EXPECT_EQ(base, requestDigest(project_, {}, settings));
  EXPECT_NE(base, requestDigest(project_, mutated(), settings));
  // An overlay equal to the file on disk is the same request.
  EXPECT_EQ(base, requestDigest(project_, {{"double_number.adb", testing::kDoubleNumber}}, settings));
  ProverSettings slower = settings;
  slower.timeoutSeconds = 5;
  EXPECT_EQ(base, requestDigest(project_, {}, slower));
  ProverSettings level = settings;
  level.level = 3;
  EXPECT_NE(base, requestDigest(project_, {}, level));
}

TEST_F(ProverTest, RecordThenReplayIsIdentical) {
  fs::path cassettePath = scratch_.path() / "cassette.json";
  handle_.cassette = cassettePath;
  ProofReport recordedOriginal = runProver(handle_, project_, {});
  ProofReport recordedMutant = runProver(handle_, project_, mutated());

  ProverHandle replay{ProverBackend::Replay, handle_.settings, cassettePath, "unused"};
  for (int round = 0; round < 2; ++round) {
    EXPECT_EQ(runProver(replay, project_, {}), recordedOriginal);
    EXPECT_EQ(runProver(replay, project_, mutated()), recordedMutant);
  }
  EXPECT_EQ(ProverCassette::load(cassettePath).size(), 2u);
  EXPECT_EQ(readFile(cassettePath).find("\"version\": 1") != std::string::npos ||
                readFile(cassettePath).find("\"version\":1") != std::string::npos,
            true);
}

TEST_F(ProverTest, ReplayMissFailsLoudly) {
  fs::path cassettePath = scratch_.path() / "cassette.json";
  ProverCassette empty;
  empty.save(cassettePath);
  ProverHandle replay{ProverBackend::Replay, {}, cassettePath, "unused"};
  try {
    runProver(replay, project_, mutated());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CassetteMiss);
  }
}

TEST_F(ProverTest, ReplayOfVerifiedEntry) {
  fs::path cassettePath = scratch_.path() / "cassette.json";
  ProverCassette cassette;
  cassette.insert(requestDigest(project_, {}, {}),
                  CassetteEntry{"Phase 1 of 2: generation of Global contracts ...\n", 0, 1.5, false});
  cassette.save(cassettePath);
  ProofReport report =
      runProver(ProverHandle{ProverBackend::Replay, {}, cassettePath, "unused"}, project_, {});
  EXPECT_TRUE(report.verified());
  EXPECT_EQ(report.mediums(), 0u);
  EXPECT_DOUBLE_EQ(report.duration, 1.5);
}

TEST_F(ProverTest, ReplayRequiresCassette) {
  ProverHandle replay{ProverBackend::Replay, {}, std::nullopt, "unused"};
  EXPECT_THROW(makeProver(replay), Error);
}

}  // namespace
}  // namespace pragmasmith
