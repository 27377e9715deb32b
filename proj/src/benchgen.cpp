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

#include "pragmasmith/benchgen.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "pragmasmith/common.hpp"
#include "pragmasmith/serialize.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace pragmasmith {
namespace {

std::vector<PragmaSite> sitesInLoop(const StructureMap& map, int loop, bool targetedOnly) {
  std::vector<PragmaSite> out;
  for (const PragmaSite& s : map.sites) {
    if (s.innermostLoop() == loop && (!targetedOnly || isTargetedKind(s.kind))) out.push_back(s);
  }
  return out;
}

std::optional<PragmaSite> lastInvariant(const StructureMap& map, int loop) {
  std::optional<PragmaSite> last;
  for (const PragmaSite& s : map.sites) {
    if (s.innermostLoop() == loop && s.kind == PragmaKind::LoopInvariant) last = s;
  }
  return last;
}

}  // namespace

std::string_view schemaName(Schema schema) {
  switch (schema) {
    case Schema::AllPragmas: return "AllPragmas";
    case Schema::LastInvariantAllLoops: return "LastInvariantAllLoops";
    case Schema::AllPragmasOneLoop: return "AllPragmasOneLoop";
    case Schema::LastInvariantOneLoop: return "LastInvariantOneLoop";
    case Schema::OneAssert: return "OneAssert";
  }
  return "AllPragmas";
}

std::string_view schemaTitle(Schema schema) {
  switch (schema) {
    case Schema::AllPragmas: return "All pragmas";
    case Schema::LastInvariantAllLoops: return "Last invariant all loops";
    case Schema::AllPragmasOneLoop: return "All pragmas one loop";
    case Schema::LastInvariantOneLoop: return "Last invariant one loop";
    case Schema::OneAssert: return "One assert";
  }
  return "All pragmas";
}

std::optional<Schema> schemaFromName(std::string_view name) {
  for (Schema s : kAllSchemata) {
    if (equalsIgnoreCase(schemaName(s), name)) return s;
  }
  return std::nullopt;
}

bool isTargetedKind(PragmaKind kind) { return kind != PragmaKind::Other; }

std::vector<std::vector<PragmaSite>> selectSites(const StructureMap& map, Schema schema) {
  std::vector<std::vector<PragmaSite>> selections;
  switch (schema) {
    case Schema::AllPragmas: {
      std::vector<PragmaSite> all;
      for (const PragmaSite& s : map.sites) {
        if (isTargetedKind(s.kind)) all.push_back(s);
      }
      if (!all.empty()) selections.push_back(std::move(all));
      break;
    }
    case Schema::LastInvariantAllLoops: {
      std::vector<PragmaSite> lasts;
      for (const LoopRegion& loop : map.loops) {
        if (auto s = lastInvariant(map, loop.index)) lasts.push_back(*s);
      }
      std::sort(lasts.begin(), lasts.end(), [](const PragmaSite& a, const PragmaSite& b) {
        return a.span.begin < b.span.begin;
      });
      if (!lasts.empty()) selections.push_back(std::move(lasts));
      break;
    }
    case Schema::AllPragmasOneLoop:
      for (const LoopRegion& loop : map.loops) {
        if (loop.invariantCount >= 2) selections.push_back(sitesInLoop(map, loop.index, true));
      }
      break;
    case Schema::LastInvariantOneLoop:
      for (const LoopRegion& loop : map.loops) {
        if (auto s = lastInvariant(map, loop.index)) selections.push_back({*s});
      }
      break;
    case Schema::OneAssert:
      for (const PragmaSite& s : map.sites) {
        if (s.kind == PragmaKind::Assert) selections.push_back({s});
      }
      break;
  }
  return selections;
}

std::vector<CaseDraft> enumerateCases(const SparkProject& project, Schema schema) {
  std::string original = readFile(project.root / project.targetBody);
  StructureMap map = scanStructure(original);
  std::vector<CaseDraft> drafts;
  for (std::vector<PragmaSite>& sites : selectSites(map, schema)) {
    CaseDraft draft;
    draft.caseId = project.name + "/" + std::string(schemaName(schema)) + "/" +
                   std::to_string(drafts.size());
    draft.project = project;
    draft.schema = schema;
    for (const PragmaSite& s : sites) {
      draft.removedSites.push_back(
          RemovedSite{s, original.substr(s.span.begin, s.span.size())});
    }
    draft.deletions = planRemoval(original, sites);
    draft.mutatedBody = removeSites(original, map, sites);
    draft.originalDigest = map.sourceDigest;
    drafts.push_back(std::move(draft));
  }
  return drafts;
}

std::string restoreOriginal(const CaseDraft& draft) {
  return restoreDeletions(draft.mutatedBody, draft.deletions);
}

FilterOutcome filterCase(const CaseDraft& draft, Prover& prover) {
  ProofReport baseline =
      prover.run(draft.project, Overlay{{draft.project.targetBody, draft.mutatedBody}});
  FilterOutcome outcome;
  if (baseline.unresolved) {
    outcome.status = FilterOutcome::Status::Unresolved;
    outcome.reason = baseline.timedOut ? "prover timeout" : "prover failure";
  } else if (baseline.errors() > 0) {
    outcome.status = FilterOutcome::Status::Rejected;
    outcome.reason = "baseline errors";
  } else if (baseline.mediums() == 0) {
    outcome.status = FilterOutcome::Status::Rejected;
    outcome.reason = "already fully verified";
  } else {
    outcome.status = FilterOutcome::Status::Accepted;
    BenchmarkCase accepted;
    static_cast<CaseDraft&>(accepted) = draft;
    accepted.baseline = std::move(baseline);
    outcome.accepted = std::move(accepted);
  }
  return outcome;
}

Manifest emitManifest(const std::vector<BenchmarkCase>& cases, const fs::path& out) {
  std::set<std::string> ids;
  for (const BenchmarkCase& c : cases) {
    if (!ids.insert(c.caseId).second) {
      throw Error(ErrorCode::Config, "duplicate case id " + c.caseId);
    }
  }
  Manifest manifest{kManifestVersion, cases};
  fs::path base = fs::absolute(out).parent_path();
  json doc = manifestToJson(manifest, base);
  writeFile(out, doc.dump(2) + "\n");
  return manifest;
}

Manifest loadManifest(const fs::path& path, bool verifyDigests) {
  json doc;
  try {
    doc = json::parse(readFile(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, "malformed manifest " + path.string() + ": " + e.what());
  }
  fs::path base = fs::absolute(path).parent_path();
  Manifest manifest = manifestFromJson(doc, base, verifyDigests);
  std::set<std::string> ids;
  for (const BenchmarkCase& c : manifest.cases) {
    if (!ids.insert(c.caseId).second) {
      throw Error(ErrorCode::Config, "duplicate case id " + c.caseId + " in " + path.string());
    }
  }
  return manifest;
}

const BenchmarkCase* findCase(const Manifest& manifest, std::string_view caseId) {
  for (const BenchmarkCase& c : manifest.cases) {
    if (c.caseId == caseId) return &c;
  }
  return nullptr;
}

std::vector<SparkProject> loadCorpus(const fs::path& dir) {
  std::vector<SparkProject> projects;
  fs::path listing = dir / "corpus.json";
  if (fs::exists(listing)) {
    json doc = json::parse(readFile(listing));
    for (const json& entry : doc) {
      projects.push_back(discoverProject(dir / entry.at("dir").get<std::string>(),
                                         entry.value("target_body", std::string())));
    }
    return projects;
  }
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_directory()) continue;
    bool hasGpr = false;
    for (const auto& f : fs::directory_iterator(entry.path())) {
      if (toLower(f.path().extension().string()) == ".gpr") hasGpr = true;
    }
    if (hasGpr) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const fs::path& d : dirs) projects.push_back(discoverProject(d));
  return projects;
}

}  // namespace pragmasmith
