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

// Candidate implementation files taken from model responses, and the check
// that a candidate only adds annotations to the file it was derived from.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pragmasmith/ada_lex.hpp"

namespace pragmasmith {

enum class Extraction { AdaFence, GenericFence };

std::string_view extractionName(Extraction e);

struct CandidateOrigin {
  int attemptIndex = 0;
  int completionIndex = 0;
  bool operator==(const CandidateOrigin&) const = default;
};

struct Candidate {
  std::string body;
  CandidateOrigin origin;
  Extraction extraction = Extraction::AdaFence;
};

/// Picks the last ```ada block, else the last untagged ``` block, and returns
/// its contents without the fences. nullopt means no code was found.
std::optional<Candidate> extractCode(std::string_view response, CandidateOrigin origin = {});

/// Pragmas a candidate may add. Assume, Annotate and friends could discharge
/// proofs without proving anything, so they are not on the list.
bool isInsertablePragma(std::string_view name);

struct Violation {
  /// Location in the original for removed code, in the candidate otherwise.
  Span span;
  std::string reason;
};

struct InsertedRegion {
  /// Candidate byte range from the first to the last inserted token.
  Span span;
  std::string description;
};

struct ValidationResult {
  enum class Verdict { Accepted, Rejected };
  Verdict verdict = Verdict::Rejected;
  std::vector<Violation> violations;
  std::vector<InsertedRegion> insertedRegions;

  bool accepted() const { return verdict == Verdict::Accepted; }
};

/// Accepts iff `candidate` equals `original` (ignoring whitespace, comments
/// and identifier case) plus inserted regions that are each a sequence of
/// annotation pragmas, optionally nested in `for ... loop` / `if ... then`
/// wrappers that hold nothing else.
ValidationResult validateDiff(std::string_view original, std::string_view candidate);

}  // namespace pragmasmith
