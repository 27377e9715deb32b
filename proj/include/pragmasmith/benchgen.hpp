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

// Benchmark construction: remove annotations from verified projects by one
// of five schemata, keep the mutants the prover no longer accepts, and
// persist them as a manifest.

#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pragmasmith/ada_lex.hpp"
#include "pragmasmith/project.hpp"
#include "pragmasmith/prover.hpp"

namespace pragmasmith {

enum class Schema {
  AllPragmas,
  LastInvariantAllLoops,
  AllPragmasOneLoop,
  LastInvariantOneLoop,
  OneAssert,
};

inline constexpr std::array<Schema, 5> kAllSchemata = {
    Schema::AllPragmas, Schema::LastInvariantAllLoops, Schema::AllPragmasOneLoop,
    Schema::LastInvariantOneLoop, Schema::OneAssert};

std::string_view schemaName(Schema schema);
/// Human-readable benchmark title, e.g. "Last invariant one loop".
std::string_view schemaTitle(Schema schema);
std::optional<Schema> schemaFromName(std::string_view name);

/// Sites the schemata may remove: Loop_Invariant, Loop_Variant and Assert.
bool isTargetedKind(PragmaKind kind);

struct RemovedSite {
  PragmaSite site;
  /// Source text of the span.
  std::string text;
  bool operator==(const RemovedSite&) const = default;
};

struct CaseDraft {
  std::string caseId;
  SparkProject project;
  Schema schema = Schema::AllPragmas;
  std::vector<RemovedSite> removedSites;
  /// Exact byte runs deleted from the original body; restoring them
  /// reproduces it.
  std::vector<Deletion> deletions;
  std::string originalDigest;
  std::string mutatedBody;
  bool operator==(const CaseDraft&) const = default;
};

struct BenchmarkCase : CaseDraft {
  ProofReport baseline;
  bool operator==(const BenchmarkCase&) const = default;
};

/// Original target body rebuilt from the mutated body and its deletions.
std::string restoreOriginal(const CaseDraft& draft);

/// Site selections a schema yields for one scanned body, in case order.
std::vector<std::vector<PragmaSite>> selectSites(const StructureMap& map, Schema schema);

/// Mutants of the project's target body under `schema`. Propagates scan errors.
std::vector<CaseDraft> enumerateCases(const SparkProject& project, Schema schema);

struct FilterOutcome {
  enum class Status { Accepted, Rejected, Unresolved };
  Status status = Status::Rejected;
  std::optional<BenchmarkCase> accepted;
  std::string reason;
};

/// Keeps a draft iff its baseline has at least one medium and no errors.
/// Timeouts and tool crashes come back Unresolved.
FilterOutcome filterCase(const CaseDraft& draft, Prover& prover);

struct Manifest {
  int version = 1;
  std::vector<BenchmarkCase> cases;
  bool operator==(const Manifest&) const = default;
};

inline constexpr int kManifestVersion = 1;

/// Writes the manifest (project roots stored relative to its directory).
Manifest emitManifest(const std::vector<BenchmarkCase>& cases, const std::filesystem::path& out);

/// Reads a manifest. With `verifyDigests`, every referenced project file must
/// still hash to its recorded digest (Error(StaleSites) otherwise).
Manifest loadManifest(const std::filesystem::path& path, bool verifyDigests = true);

const BenchmarkCase* findCase(const Manifest& manifest, std::string_view caseId);

/// Projects under `dir`: entries of `dir/corpus.json` when present
/// (`[{"dir": ..., "target_body": ...}]`), otherwise every immediate
/// subdirectory holding a `.gpr` file, sorted by name.
std::vector<SparkProject> loadCorpus(const std::filesystem::path& dir);

}  // namespace pragmasmith
