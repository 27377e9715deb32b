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

#include "pragmasmith/serialize.hpp"

#include "pragmasmith/common.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace pragmasmith {
namespace {

json spanToJson(const Span& s) {
  return json{{"begin", s.begin}, {"end", s.end}, {"line", s.line}, {"column", s.column}};
}

Span spanFromJson(const json& j) {
  return Span{j.at("begin").get<size_t>(), j.at("end").get<size_t>(), j.at("line").get<int>(),
              j.at("column").get<int>()};
}

PragmaKind pragmaKindFromJson(const std::string& name) {
  if (name == "Other") return PragmaKind::Other;
  return pragmaKindFromName(name);
}

json projectToJson(const SparkProject& p, const fs::path& base) {
  json digests = json::object();
  for (const std::string& file : p.allFiles()) digests[file] = sha256Hex(readFile(p.root / file));
  return json{{"name", p.name},
              {"root", fs::relative(p.root, base).generic_string()},
              {"project_file", p.projectFile},
              {"spec_files", p.specFiles},
              {"body_files", p.bodyFiles},
              {"target_body", p.targetBody},
              {"digests", digests}};
}

SparkProject projectFromJson(const json& j, const fs::path& base, bool verifyDigests) {
  SparkProject p;
  p.name = j.at("name").get<std::string>();
  p.root = (base / j.at("root").get<std::string>()).lexically_normal();
  // A root equal to the base normalizes with a trailing separator.
  if (!p.root.has_filename()) p.root = p.root.parent_path();
  p.projectFile = j.at("project_file").get<std::string>();
  p.specFiles = j.at("spec_files").get<std::vector<std::string>>();
  p.bodyFiles = j.at("body_files").get<std::vector<std::string>>();
  p.targetBody = j.at("target_body").get<std::string>();
  if (verifyDigests) {
    for (const auto& [file, digest] : j.at("digests").items()) {
      fs::path path = p.root / file;
      if (!fs::exists(path) || sha256Hex(readFile(path)) != digest.get<std::string>()) {
        throw Error(ErrorCode::StaleSites,
                    "project file " + path.string() + " no longer matches the manifest digest");
      }
    }
  }
  return p;
}

}  // namespace

json diagnosticToJson(const Diagnostic& d) {
  json j{{"severity", severityName(d.severity)},
         {"file", d.file},
         {"line", d.line},
         {"column", d.column},
         {"message", d.message}};
  if (d.counterexample) j["counterexample"] = *d.counterexample;
  return j;
}

Diagnostic diagnosticFromJson(const json& j) {
  Diagnostic d;
  auto sev = severityFromName(j.at("severity").get<std::string>());
  if (!sev) throw Error(ErrorCode::Io, "unknown severity " + j.at("severity").dump());
  d.severity = *sev;
  d.file = j.at("file").get<std::string>();
  d.line = j.at("line").get<int>();
  d.column = j.at("column").get<int>();
  d.message = j.at("message").get<std::string>();
  if (j.contains("counterexample")) d.counterexample = j.at("counterexample").get<std::string>();
  return d;
}

json reportToJson(const ProofReport& report) {
  json diags = json::array();
  for (const Diagnostic& d : report.diagnostics) diags.push_back(diagnosticToJson(d));
  return json{{"diagnostics", diags},
              {"exit_status", report.exitStatus},
              {"raw_output", report.rawOutput},
              {"duration", report.duration},
              {"unresolved", report.unresolved},
              {"timed_out", report.timedOut},
              {"verified", report.verified()}};
}

ProofReport reportFromJson(const json& j) {
  ProofReport r;
  for (const json& d : j.at("diagnostics")) r.diagnostics.push_back(diagnosticFromJson(d));
  r.exitStatus = j.at("exit_status").get<int>();
  r.rawOutput = j.at("raw_output").get<std::string>();
  r.duration = j.value("duration", 0.0);
  r.unresolved = j.value("unresolved", false);
  r.timedOut = j.value("timed_out", false);
  return r;
}

json siteToJson(const PragmaSite& site) {
  return json{{"kind", pragmaKindName(site.kind)},
              {"name", site.name},
              {"span", spanToJson(site.span)},
              {"loop_path", site.loopPath},
              {"ordinal_in_loop", site.ordinalInLoop}};
}

PragmaSite siteFromJson(const json& j) {
  PragmaSite s;
  s.kind = pragmaKindFromJson(j.at("kind").get<std::string>());
  s.name = j.at("name").get<std::string>();
  s.span = spanFromJson(j.at("span"));
  s.loopPath = j.at("loop_path").get<std::vector<int>>();
  s.ordinalInLoop = j.at("ordinal_in_loop").get<int>();
  return s;
}

json manifestToJson(const Manifest& manifest, const fs::path& base) {
  json cases = json::array();
  for (const BenchmarkCase& c : manifest.cases) {
    json removed = json::array();
    for (const RemovedSite& r : c.removedSites) {
      json site = siteToJson(r.site);
      site["text"] = r.text;
      removed.push_back(site);
    }
    json deletions = json::array();
    for (const Deletion& d : c.deletions) {
      deletions.push_back(json{{"offset", d.offset}, {"text", d.text}});
    }
    cases.push_back(json{{"case_id", c.caseId},
                         {"schema", schemaName(c.schema)},
                         {"project", projectToJson(c.project, base)},
                         {"original_digest", c.originalDigest},
                         {"removed_sites", removed},
                         {"deletions", deletions},
                         {"mutated_body", c.mutatedBody},
                         {"mutated_digest", sha256Hex(c.mutatedBody)},
                         {"baseline", reportToJson(c.baseline)}});
  }
  return json{{"version", manifest.version}, {"cases", cases}};
}

Manifest manifestFromJson(const json& doc, const fs::path& base, bool verifyDigests) {
  Manifest manifest;
  manifest.version = doc.at("version").get<int>();
  if (manifest.version != kManifestVersion) {
    throw Error(ErrorCode::Config, "unsupported manifest version " +
                                       std::to_string(manifest.version));
  }
  for (const json& j : doc.at("cases")) {
    BenchmarkCase c;
    c.caseId = j.at("case_id").get<std::string>();
    auto schema = schemaFromName(j.at("schema").get<std::string>());
    if (!schema) throw Error(ErrorCode::Config, "unknown schema in case " + c.caseId);
    c.schema = *schema;
    c.project = projectFromJson(j.at("project"), base, verifyDigests);
    c.originalDigest = j.at("original_digest").get<std::string>();
    for (const json& r : j.at("removed_sites")) {
      c.removedSites.push_back(RemovedSite{siteFromJson(r), r.at("text").get<std::string>()});
    }
    for (const json& d : j.at("deletions")) {
      c.deletions.push_back(Deletion{d.at("offset").get<size_t>(), d.at("text").get<std::string>()});
    }
    c.mutatedBody = j.at("mutated_body").get<std::string>();
    if (j.contains("mutated_digest") && sha256Hex(c.mutatedBody) != j.at("mutated_digest")) {
      throw Error(ErrorCode::StaleSites, "mutated body digest mismatch in case " + c.caseId);
    }
    c.baseline = reportFromJson(j.at("baseline"));
    manifest.cases.push_back(std::move(c));
  }
  return manifest;
}

}  // namespace pragmasmith
