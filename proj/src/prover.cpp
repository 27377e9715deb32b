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

#include <algorithm>
#include <charconv>

#include "json.hpp"
#include "pragmasmith/common.hpp"
#include "pragmasmith/subprocess.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace pragmasmith {
namespace {

bool parsePositive(std::string_view text, int& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size() && out >= 1;
}

// Matches `<path>:<line>:<col>: <severity>: <message>`.
std::optional<Diagnostic> parseLine(std::string_view line) {
  if (line.empty() || line.front() == ' ' || line.front() == '\t') return std::nullopt;
  // The path is everything before the first ":<digits>:<digits>: " group.
  for (size_t colon = line.find(':'); colon != std::string_view::npos;
       colon = line.find(':', colon + 1)) {
    if (colon == 0) continue;
    size_t lineEnd = line.find(':', colon + 1);
    if (lineEnd == std::string_view::npos) return std::nullopt;
    size_t colEnd = line.find(':', lineEnd + 1);
    if (colEnd == std::string_view::npos) return std::nullopt;
    int lineNo = 0;
    int colNo = 0;
    if (!parsePositive(line.substr(colon + 1, lineEnd - colon - 1), lineNo) ||
        !parsePositive(line.substr(lineEnd + 1, colEnd - lineEnd - 1), colNo)) {
      continue;
    }
    std::string_view rest = line.substr(colEnd + 1);
    if (rest.size() < 2 || rest.front() != ' ') return std::nullopt;
    rest.remove_prefix(1);
    size_t tagEnd = rest.find(':');
    if (tagEnd == std::string_view::npos) return std::nullopt;
    std::optional<Severity> severity = severityFromName(rest.substr(0, tagEnd));
    if (!severity) return std::nullopt;
    std::string_view message = rest.substr(tagEnd + 1);
    if (!message.empty() && message.front() == ' ') message.remove_prefix(1);
    while (!message.empty() && message.back() == '\r') message.remove_suffix(1);
    Diagnostic d;
    d.severity = *severity;
    d.file = std::string(line.substr(0, colon));
    d.line = lineNo;
    d.column = colNo;
    d.message = std::string(message);
    return d;
  }
  return std::nullopt;
}

json entryToJson(const CassetteEntry& e) {
  return json{{"raw_output", e.rawOutput},
              {"exit_status", e.exitStatus},
              {"duration", e.duration},
              {"timed_out", e.timedOut}};
}

CassetteEntry entryFromJson(const json& j) {
  CassetteEntry e;
  e.rawOutput = j.at("raw_output").get<std::string>();
  e.exitStatus = j.at("exit_status").get<int>();
  e.duration = j.value("duration", 0.0);
  e.timedOut = j.value("timed_out", false);
  return e;
}

std::string readWithOverlay(const SparkProject& project, const Overlay& overlay,
                            const std::string& file) {
  auto it = overlay.find(file);
  if (it != overlay.end()) return it->second;
  return readFile(project.root / file);
}

}  // namespace

std::string_view severityName(Severity severity) {
  switch (severity) {
    case Severity::Error: return "error";
    case Severity::Medium: return "medium";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
  }
  return "info";
}

std::optional<Severity> severityFromName(std::string_view name) {
  if (name == "error") return Severity::Error;
  if (name == "medium" || name == "high" || name == "low") return Severity::Medium;
  if (name == "warning") return Severity::Warning;
  if (name == "info") return Severity::Info;
  return std::nullopt;
}

std::vector<Diagnostic> parseDiagnostics(std::string_view raw) {
  std::vector<Diagnostic> out;
  bool continuing = false;
  size_t start = 0;
  while (start < raw.size()) {
    size_t end = raw.find('\n', start);
    if (end == std::string_view::npos) end = raw.size();
    std::string_view line = raw.substr(start, end - start);
    start = end + 1;

    if (auto d = parseLine(line)) {
      out.push_back(std::move(*d));
      continuing = out.back().severity == Severity::Medium;
      continue;
    }
    bool indented = !line.empty() && (line.front() == ' ' || line.front() == '\t');
    if (continuing && indented) {
      std::string_view text = line;
      while (!text.empty() && text.back() == '\r') text.remove_suffix(1);
      std::optional<std::string>& ce = out.back().counterexample;
      if (ce) {
        *ce += '\n';
        *ce += text;
      } else {
        ce = std::string(text);
      }
      continue;
    }
    continuing = false;
  }
  return out;
}

size_t ProofReport::count(Severity severity) const {
  return static_cast<size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                           [&](const Diagnostic& d) { return d.severity == severity; }));
}

bool ProofReport::verified() const {
  return !unresolved && exitStatus == 0 && errors() == 0 && mediums() == 0;
}

std::vector<Diagnostic> ProofReport::mediumDiagnostics() const {
  std::vector<Diagnostic> out;
  for (const Diagnostic& d : diagnostics) {
    if (d.severity == Severity::Medium) out.push_back(d);
  }
  return out;
}

ProofReport makeReport(std::string rawOutput, int exitStatus, double duration, bool timedOut) {
  ProofReport report;
  report.diagnostics = parseDiagnostics(rawOutput);
  report.rawOutput = std::move(rawOutput);
  report.exitStatus = exitStatus;
  report.duration = duration;
  // A nonzero exit that explains itself with errors is a refutation; one
  // without any diagnostic is a tool failure.
  bool crashed = exitStatus >= 128 || (exitStatus != 0 && report.errors() == 0 &&
                                       report.mediums() == 0);
  report.timedOut = timedOut;
  report.unresolved = timedOut || crashed;
  return report;
}

std::vector<std::string> proverCommand(const ProverHandle& handle, const SparkProject& project) {
  std::vector<std::string> argv{handle.executable, "-P", project.projectFile,
                                "--mode=" + handle.settings.mode};
  if (handle.settings.level) argv.push_back("--level=" + std::to_string(*handle.settings.level));
  if (handle.settings.steps) argv.push_back("--steps=" + std::to_string(*handle.settings.steps));
  argv.insert(argv.end(), handle.settings.extraArgs.begin(), handle.settings.extraArgs.end());
  return argv;
}

void checkOverlay(const SparkProject& project, const Overlay& overlay) {
  for (const auto& [file, contents] : overlay) {
    bool known =
        std::find(project.specFiles.begin(), project.specFiles.end(), file) !=
            project.specFiles.end() ||
        std::find(project.bodyFiles.begin(), project.bodyFiles.end(), file) !=
            project.bodyFiles.end();
    if (!known) {
      throw Error(ErrorCode::PreconditionViolation,
                  "overlay file " + file + " is not a source of project " + project.name);
    }
  }
}

std::string requestDigest(const SparkProject& project, const Overlay& overlay,
                          const ProverSettings& settings) {
  json files = json::object();
  for (const std::string& file : project.allFiles()) {
    files[file] = sha256Hex(readWithOverlay(project, overlay, file));
  }
  json key{{"files", files},
           {"settings",
            {{"mode", settings.mode},
             {"level", settings.level ? json(*settings.level) : json()},
             {"steps", settings.steps ? json(*settings.steps) : json()},
             {"extra_args", settings.extraArgs}}}};
  return sha256Hex(key.dump());
}

ProverCassette ProverCassette::load(const fs::path& path) {
  ProverCassette cassette;
  json doc;
  try {
    doc = json::parse(readFile(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, "malformed prover cassette " + path.string() + ": " + e.what());
  }
  for (const auto& [key, value] : doc.at("entries").items()) {
    cassette.entries_[key] = entryFromJson(value);
  }
  return cassette;
}

std::optional<CassetteEntry> ProverCassette::find(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ProverCassette::insert(const std::string& key, CassetteEntry entry) {
  std::lock_guard lock(mutex_);
  entries_[key] = std::move(entry);
}

void ProverCassette::save(const fs::path& path) const {
  json doc{{"version", 1}, {"entries", json::object()}};
  {
    std::lock_guard lock(mutex_);
    for (const auto& [key, entry] : entries_) doc["entries"][key] = entryToJson(entry);
  }
  fs::path tmp = path;
  tmp += ".tmp";
  writeFile(tmp, doc.dump(2) + "\n");
  fs::rename(tmp, path);
}

size_t ProverCassette::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

SubprocessProver::SubprocessProver(ProverHandle handle) : handle_(std::move(handle)) {
  // The tool runs inside a scratch directory, so relative paths must be pinned now.
  if (handle_.executable.find('/') != std::string::npos) {
    handle_.executable = fs::absolute(handle_.executable).lexically_normal().string();
  }
  if (handle_.cassette) {
    recording_ = std::make_shared<ProverCassette>(
        fs::exists(*handle_.cassette) ? ProverCassette::load(*handle_.cassette)
                                      : ProverCassette());
  }
}

ProofReport SubprocessProver::run(const SparkProject& project, const Overlay& overlay) {
  checkOverlay(project, overlay);
  std::string key = recording_ ? requestDigest(project, overlay, handle_.settings) : std::string();

  ProcessResult result;
  {
    ScratchDir scratch("gnatprove");
    for (const std::string& file : project.allFiles()) {
      writeFile(scratch.path() / file, readWithOverlay(project, overlay, file));
    }
    result = runProcess(proverCommand(handle_, project), scratch.path(),
                        std::chrono::seconds(handle_.settings.timeoutSeconds));
  }

  if (recording_) {
    // Single writer: the cassette serializes insertion and the file rewrite.
    static std::mutex fileMutex;
    std::lock_guard lock(fileMutex);
    recording_->insert(key, CassetteEntry{result.output, result.exitStatus, result.seconds,
                                          result.timedOut});
    recording_->save(*handle_.cassette);
  }
  return makeReport(std::move(result.output), result.exitStatus, result.seconds,
                    result.timedOut);
}

ReplayProver::ReplayProver(ProverSettings settings, std::shared_ptr<const ProverCassette> cassette)
    : settings_(std::move(settings)), cassette_(std::move(cassette)) {}

ProofReport ReplayProver::run(const SparkProject& project, const Overlay& overlay) {
  checkOverlay(project, overlay);
  std::string key = requestDigest(project, overlay, settings_);
  std::optional<CassetteEntry> entry = cassette_->find(key);
  if (!entry) {
    throw Error(ErrorCode::CassetteMiss,
                "no recorded prover run for project " + project.name + " (key " + key + ")");
  }
  return makeReport(entry->rawOutput, entry->exitStatus, entry->duration, entry->timedOut);
}

std::unique_ptr<Prover> makeProver(const ProverHandle& handle) {
  if (handle.backend == ProverBackend::Replay) {
    if (!handle.cassette) {
      throw Error(ErrorCode::Config, "replay prover backend requires a cassette");
    }
    auto cassette = std::make_shared<ProverCassette>(ProverCassette::load(*handle.cassette));
    return std::make_unique<ReplayProver>(handle.settings, std::move(cassette));
  }
  return std::make_unique<SubprocessProver>(handle);
}

ProofReport runProver(const ProverHandle& handle, const SparkProject& project,
                      const Overlay& overlay) {
  return makeProver(handle)->run(project, overlay);
}

}  // namespace pragmasmith
