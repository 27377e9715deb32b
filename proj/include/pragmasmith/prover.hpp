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

// GNATprove invocation, output parsing, and digest-keyed record/replay.

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pragmasmith/project.hpp"

namespace pragmasmith {

enum class Severity { Error, Medium, Warning, Info };

std::string_view severityName(Severity severity);
std::optional<Severity> severityFromName(std::string_view name);

struct Diagnostic {
  Severity severity = Severity::Info;
  std::string file;
  int line = 1;
  int column = 1;
  std::string message;
  /// Indented continuation lines that followed a medium, verbatim.
  std::optional<std::string> counterexample;

  bool operator==(const Diagnostic&) const = default;
};

/// Parses `<path>:<line>:<col>: <severity>: <message>` lines. Never fails;
/// lines outside the grammar are skipped. GNATprove's `high` and `low`
/// check severities are reported as mediums (unproved checks).
std::vector<Diagnostic> parseDiagnostics(std::string_view raw);

struct ProofReport {
  std::vector<Diagnostic> diagnostics;
  int exitStatus = 0;
  std::string rawOutput;
  double duration = 0.0;
  /// The run did not complete (timeout or tool crash); neither verified nor
  /// refuted.
  bool unresolved = false;
  bool timedOut = false;

  size_t count(Severity severity) const;
  size_t mediums() const { return count(Severity::Medium); }
  size_t errors() const { return count(Severity::Error); }
  /// Error- and medium-free after a normal exit.
  bool verified() const;
  std::vector<Diagnostic> mediumDiagnostics() const;

  bool operator==(const ProofReport&) const = default;
};

/// Builds a report from captured tool output.
ProofReport makeReport(std::string rawOutput, int exitStatus, double duration, bool timedOut);

struct ProverSettings {
  std::string mode = "all";
  std::optional<int> level;
  std::optional<int> steps;
  /// Wall-clock budget per run.
  int timeoutSeconds = 300;
  std::vector<std::string> extraArgs;
  bool operator==(const ProverSettings&) const = default;
};

enum class ProverBackend { Subprocess, Replay };

struct ProverHandle {
  ProverBackend backend = ProverBackend::Subprocess;
  ProverSettings settings;
  /// Replay: cassette to read. Subprocess: optional cassette to record into.
  std::optional<std::filesystem::path> cassette;
  std::string executable = "gnatprove";
};

/// Command line used for the subprocess backend.
std::vector<std::string> proverCommand(const ProverHandle& handle, const SparkProject& project);

/// Cassette key: SHA-256 over the project sources (overlay applied) and the
/// settings that influence tool output.
std::string requestDigest(const SparkProject& project, const Overlay& overlay,
                          const ProverSettings& settings);

/// Throws Error(PreconditionViolation) for overlay paths that are not
/// sources of the project.
void checkOverlay(const SparkProject& project, const Overlay& overlay);

struct CassetteEntry {
  std::string rawOutput;
  int exitStatus = 0;
  double duration = 0.0;
  bool timedOut = false;
};

/// Digest-keyed store of recorded tool runs. Thread-safe; recording rewrites
/// the backing file after each insertion.
class ProverCassette {
 public:
  ProverCassette() = default;
  ProverCassette(ProverCassette&& other) noexcept : entries_(std::move(other.entries_)) {}
  static ProverCassette load(const std::filesystem::path& path);

  std::optional<CassetteEntry> find(const std::string& key) const;
  void insert(const std::string& key, CassetteEntry entry);
  void save(const std::filesystem::path& path) const;
  size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, CassetteEntry> entries_;
};

class Prover {
 public:
  virtual ~Prover() = default;
  virtual ProofReport run(const SparkProject& project, const Overlay& overlay) = 0;
};

/// Runs the real toolchain in a scratch copy; records into a cassette when
/// the handle names one.
class SubprocessProver : public Prover {
 public:
  explicit SubprocessProver(ProverHandle handle);
  ProofReport run(const SparkProject& project, const Overlay& overlay) override;

 private:
  ProverHandle handle_;
  std::shared_ptr<ProverCassette> recording_;
};

/// Answers from a cassette only; a missing key is Error(CassetteMiss).
class ReplayProver : public Prover {
 public:
  ReplayProver(ProverSettings settings, std::shared_ptr<const ProverCassette> cassette);
  ProofReport run(const SparkProject& project, const Overlay& overlay) override;

 private:
  ProverSettings settings_;
  std::shared_ptr<const ProverCassette> cassette_;
};

std::unique_ptr<Prover> makeProver(const ProverHandle& handle);

/// One-shot convenience over makeProver(handle)->run(...).
ProofReport runProver(const ProverHandle& handle, const SparkProject& project,
                      const Overlay& overlay);

}  // namespace pragmasmith
