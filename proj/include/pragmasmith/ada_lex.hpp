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

// Lossless lexing of SPARK/Ada source and the small amount of structure
// (loops and pragma statements) needed to mutate implementation files.
//
// The scanner is lexical by construction: it recognizes `loop` / `end loop`,
// `pragma ... ;`, comments and literals, and nothing else of the grammar.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pragmasmith {

enum class TokenKind {
  Identifier,
  Keyword,
  StringLiteral,
  CharacterLiteral,
  NumericLiteral,
  Comment,
  Punctuation,
  Whitespace,
  Newline,
};

std::string_view tokenKindName(TokenKind kind);

/// Half-open byte range [begin, end) plus the 1-based position of `begin`.
struct Span {
  size_t begin = 0;
  size_t end = 0;
  int line = 1;
  int column = 1;

  size_t size() const { return end - begin; }
  bool contains(const Span& other) const {
    return begin <= other.begin && other.end <= end;
  }
  bool operator==(const Span&) const = default;
};

struct Token {
  TokenKind kind;
  std::string text;
  Span span;

  /// Whitespace, newlines and comments carry no program meaning.
  bool isTrivia() const {
    return kind == TokenKind::Whitespace || kind == TokenKind::Newline ||
           kind == TokenKind::Comment;
  }
  bool isKeyword(std::string_view word) const;
  bool isPunct(std::string_view punct) const {
    return kind == TokenKind::Punctuation && text == punct;
  }
};

/// Splits `source` into tokens covering every byte exactly once.
/// Never fails: bytes that start no known token become one-byte punctuation.
std::vector<Token> tokenize(std::string_view source);

/// Concatenation of token texts; `render(tokenize(s)) == s` for every s.
std::string render(std::span<const Token> tokens);

bool isAdaReservedWord(std::string_view word);

enum class PragmaKind { LoopInvariant, LoopVariant, Assert, Other };

std::string_view pragmaKindName(PragmaKind kind);
PragmaKind pragmaKindFromName(std::string_view name);

struct PragmaSite {
  PragmaKind kind = PragmaKind::Other;
  /// Pragma name as written, e.g. "Loop_Invariant" or "Assume".
  std::string name;
  /// From the `pragma` keyword through the terminating `;`.
  Span span;
  /// Document-order loop indices, outermost first.
  std::vector<int> loopPath;
  /// Position among sites of the same kind sharing the innermost loop
  /// (or sharing top level when outside every loop).
  int ordinalInLoop = 0;

  int innermostLoop() const { return loopPath.empty() ? -1 : loopPath.back(); }
  bool operator==(const PragmaSite&) const = default;
};

enum class LoopHeader { For, While, Bare };

struct LoopRegion {
  int index = 0;
  LoopHeader header = LoopHeader::Bare;
  /// From the first header token (or statement label) through `end loop ...;`.
  Span span;
  /// 0 for outermost loops.
  int depth = 0;
  /// Loop_Invariant sites whose innermost enclosing loop is this one.
  int invariantCount = 0;
  bool operator==(const LoopRegion&) const = default;
};

struct StructureMap {
  std::vector<PragmaSite> sites;
  std::vector<LoopRegion> loops;
  std::string sourceDigest;
};

/// Locates pragma sites and loop regions.
/// Throws Error(UnbalancedLoop) or Error(MalformedPragma).
StructureMap scanStructure(std::string_view source);

/// A contiguous run of original bytes removed by a mutation.
struct Deletion {
  size_t offset = 0;
  std::string text;
  bool operator==(const Deletion&) const = default;
};

/// Deletions implied by removing `sites`: each site span, widened to the whole
/// line (including its newline) when nothing but whitespace would remain.
/// Returned sorted and non-overlapping.
std::vector<Deletion> planRemoval(std::string_view source, std::span<const PragmaSite> sites);

/// Removes the given sites from `source`. Every site must belong to `map` and
/// `map` must have been scanned from `source`, otherwise Error(StaleSites).
std::string removeSites(std::string_view source, const StructureMap& map,
                        std::span<const PragmaSite> sites);

/// Applies a removal plan.
std::string applyDeletions(std::string_view source, std::span<const Deletion> deletions);

/// Inverse of applyDeletions: splices the deleted text back in.
std::string restoreDeletions(std::string_view mutated, std::span<const Deletion> deletions);

}  // namespace pragmasmith
