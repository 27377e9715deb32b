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


#include "pragmasmith/promptkit.hpp"

#include <algorithm>
#include <filesystem>

#include "pragmasmith/common.hpp"
#include "pragmasmith/llm_gateway.hpp"

namespace fs = std::filesystem;

namespace pragmasmith {
namespace {

constexpr std::string_view kBaseOpening =
    "Try to solve the following problem logically and step by step. The final answer should "
    "then be delimited in the following way:";

constexpr std::string_view kChainOfThoughtOpening =
    "Try to solve the following problem by first explaining in natural language what the "
    "underlying problem, leading to the medium, might be and how it could be solved. The final "
    "answer should then be delimited in the following way:";

constexpr std::string_view kFence = "```ada\n\ncode here\n\n```";

constexpr std::string_view kDependenciesIntro =
    "The following are the specifications and dependencies of a Spark2014/ADA project:";

constexpr std::string_view kBodyIntro = "This is the package body (implementation):";

constexpr std::string_view kInstructions =
    "Add one or multiple pragma statements (e.g. pragma Loop_Invariant, pragma Assert) to the "
    "package body, so that the code runs error and medium free.\n"
    "\n"
    "Make use of the mediums provided in the prompt to guide your solution.\n"
    "\n"
    "You must not modify the code in any other way, except to add \"for\" loops and \"if\" "
    "statements that enclose only pragma statements.\n"
    "\n"
    "Do not modify the functionality in any way. Return the entire implementation file with "
    "the required additions.";

constexpr std::string_view kSystemMessage =
    "You are a Spark2014/ADA programmer with strong logical reasoning abilities.\n"
    "\n"
    "You will be given an Implementation of a program, a specification of the program and the "
    "mediums that GnatProve raised for it.\n"
    "\n"
    "You must complete the package body of the given program, inserting one or multiple pragma "
    "statements.\n"
    "\n"
    "You must not modify the code in any other way, except to add for loops and if statements "
    "that enclose only pragma statements, and do not modify the functionality.";

constexpr std::string_view kMediumHeader =
    "GNATprove reported the following mediums for the package body:";

constexpr std::string_view kRetryHeader =
    "A previous attempt at this problem failed. This was the package body it returned:";

constexpr std::string_view kRetryMediumHeader =
    "GNATprove reported the following mediums for that attempt:";

std::vector<std::string_view> splitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string withNewline(std::string text) {
  if (!text.empty() && text.back() != '\n') text += '\n';
  return text;
}

std::string trimTrailingNewlines(std::string text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return text;
}

std::string formatBlock(const Diagnostic& d, const std::string_view* source) {
  std::string block = "medium: " + d.message + "\nat line " + std::to_string(d.line) + ":";
  if (source != nullptr) {
    std::vector<std::string_view> lines = splitLines(*source);
    for (int n = d.line; n <= d.line + 1; ++n) {
      if (n >= 1 && static_cast<size_t>(n) <= lines.size()) {
        block += "\n";
        block += lines[static_cast<size_t>(n) - 1];
      }
    }
  }
  return block;
}

std::map<std::string, std::string> projectSources(const SparkProject& project,
                                                  const std::string& targetBody) {
  std::map<std::string, std::string> sources;
  for (const std::string& f : project.specFiles) {
    sources[fs::path(f).filename().string()] = readFile(project.root / f);
  }
  for (const std::string& f : project.bodyFiles) {
    sources[fs::path(f).filename().string()] =
        f == project.targetBody ? targetBody : readFile(project.root / f);
  }
  return sources;
}

std::string modeName(const PromptMode& mode) {
  std::string name(promptVariantName(mode.variant));
  if (mode.mediumInPrompt) name += "+medium";
  if (mode.retryContext) name += "+retry";
  return name;
}

}  // namespace

std::string_view promptVariantName(PromptVariant variant) {
  return variant == PromptVariant::Base ? "base" : "cot";
}

std::optional<PromptVariant> promptVariantFromName(std::string_view name) {
  if (name == "base") return PromptVariant::Base;
  if (name == "cot" || name == "chain_of_thought") return PromptVariant::ChainOfThought;
  return std::nullopt;
}

std::string_view defaultSystemMessage() { return kSystemMessage; }

std::string systemMessageFor(const PromptMode&, const std::optional<std::string>& override) {
  std::string message = override ? *override : std::string(kSystemMessage);
  if (message.size() > kSystemMessageCap) {
    throw Error(ErrorCode::CapExceeded, "system message has " + std::to_string(message.size()) +
                                            " characters, cap is " +
                                            std::to_string(kSystemMessageCap));
  }
  return message;
}

std::string formatMediums(const std::vector<Diagnostic>& diags, std::string_view body) {
  std::string out;
  for (const Diagnostic& d : diags) {
    if (d.severity != Severity::Medium) continue;
    if (!out.empty()) out += "\n\n";
    out += formatBlock(d, &body);
  }
  return out;
}

std::string formatMediums(const std::vector<Diagnostic>& diags,
                          const std::map<std::string, std::string>& sources) {
  std::string out;
  for (const Diagnostic& d : diags) {
    if (d.severity != Severity::Medium) continue;
    if (!out.empty()) out += "\n\n";
    // Printed paths may carry directories; match on the file name.
    std::string name = d.file.substr(d.file.find_last_of("/\\") + 1);
    auto it = sources.find(name);
    std::string_view source;
    if (it != sources.end()) source = it->second;
    out += formatBlock(d, it != sources.end() ? &source : nullptr);
  }
  return out;
}

std::string dependencyBlock(const SparkProject& project) {
  std::vector<std::string> specs = project.specFiles;
  std::sort(specs.begin(), specs.end());
  std::vector<std::string> bodies;
  for (const std::string& f : project.bodyFiles) {
    if (f != project.targetBody) bodies.push_back(f);
  }
  std::sort(bodies.begin(), bodies.end());
  std::string out;
  for (const auto* group : {&specs, &bodies}) {
    for (const std::string& f : *group) {
      if (!out.empty()) out += "\n";
      out += "-- file: " + f + "\n" + withNewline(readFile(project.root / f));
    }
  }
  return trimTrailingNewlines(out);
}

PromptBundle buildPrompt(const BenchmarkCase& benchmarkCase, const PromptMode& mode,
                         int attemptIndex, const std::optional<std::string>& systemOverride) {
  const SparkProject& project = benchmarkCase.project;
  std::string prompt;
  prompt += mode.variant == PromptVariant::Base ? kBaseOpening : kChainOfThoughtOpening;
  prompt += "\n\n";
  prompt += kFence;
  prompt += "\n\n";
  prompt += kDependenciesIntro;
  prompt += "\n\n" + dependencyBlock(project) + "\n\n";
  prompt += kBodyIntro;
  prompt += "\n\n" + trimTrailingNewlines(benchmarkCase.mutatedBody) + "\n\n";
  prompt += kInstructions;

  if (mode.mediumInPrompt) {
    std::string mediums = formatMediums(benchmarkCase.baseline.diagnostics,
                                        projectSources(project, benchmarkCase.mutatedBody));
    if (!mediums.empty()) {
      prompt += "\n\n";
      prompt += kMediumHeader;
      prompt += "\n\n" + mediums;
    }
  }

  if (mode.retryContext) {
    const RetryContext& retry = *mode.retryContext;
    prompt += "\n\n";
    prompt += kRetryHeader;
    prompt += "\n\n```ada\n" + withNewline(retry.previousBody) + "```";
    if (!retry.note.empty()) prompt += "\n\n" + retry.note;
    std::string mediums =
        formatMediums(retry.previousDiagnostics, projectSources(project, retry.previousBody));
    if (!mediums.empty()) {
      prompt += "\n\n";
      prompt += kRetryMediumHeader;
      prompt += "\n\n" + mediums;
    }
  }

  PromptBundle bundle;
  bundle.systemMessage = systemMessageFor(mode, systemOverride);
  bundle.userPrompt = std::move(prompt);
  bundle.provenance = PromptProvenance{benchmarkCase.caseId, modeName(mode), attemptIndex};
  return bundle;
}

}  // namespace pragmasmith
