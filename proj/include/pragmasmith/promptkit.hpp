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


// Prompt assembly: the base and chain-of-thought user prompts, the system
// message, medium-in-prompt blocks and retry context.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pragmasmith/benchgen.hpp"
#include "pragmasmith/prover.hpp"

namespace pragmasmith {

enum class PromptVariant { Base, ChainOfThought };

std::string_view promptVariantName(PromptVariant variant);
std::optional<PromptVariant> promptVariantFromName(std::string_view name);

struct RetryContext {
  std::string previousBody;
  std::vector<Diagnostic> previousDiagnostics;
  /// Why the attempt failed when no proof report explains it.
  std::string note;
};

struct PromptMode {
  PromptVariant variant = PromptVariant::Base;
  bool mediumInPrompt = false;
  std::optional<RetryContext> retryContext;
};

struct PromptProvenance {
  std::string caseId;
  std::string mode;
  int attemptIndex = 0;
};

struct PromptBundle {
  std::string systemMessage;
  std::string userPrompt;
  PromptProvenance provenance;
};

/// The fixed system message; identical for both variants.
std::string_view defaultSystemMessage();

/// Returns `override` when given, else the default. Error(CapExceeded) if the
/// result is longer than the system-message cap.
std::string systemMessageFor(const PromptMode& mode,
                             const std::optional<std::string>& override = std::nullopt);

/// One block per medium: "medium: <msg>", "at line <N>:", then source lines
/// N and N+1 of `body` when they exist. Blocks are separated by blank lines.
std::string formatMediums(const std::vector<Diagnostic>& diags, std::string_view body);

/// As above, taking code lines from the source whose file name matches the
/// diagnostic's; diagnostics for unknown files get no code lines.
std::string formatMediums(const std::vector<Diagnostic>& diags,
                          const std::map<std::string, std::string>& sources);

/// `.ads` files in path order, then non-target bodies, each headed by
/// `-- file: <name>`.
std::string dependencyBlock(const SparkProject& project);

PromptBundle buildPrompt(const BenchmarkCase& benchmarkCase, const PromptMode& mode,
                         int attemptIndex = 0,
                         const std::optional<std::string>& systemOverride = std::nullopt);

}  // namespace pragmasmith
