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

#include "pragmasmith/candidate.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "pragmasmith/common.hpp"

namespace pragmasmith {
namespace {

constexpr size_t kNoParse = static_cast<size_t>(-1);

std::string_view trimLeft(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::string_view trim(std::string_view s) {
  s = trimLeft(s);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Significant tokens with a comparison key; identifiers and keywords fold
/// case as Ada does.
struct Significant {
  std::vector<Token> tokens;
  std::vector<uint32_t> keys;
};

Significant significantTokens(std::string_view text,
                              std::unordered_map<std::string, uint32_t>& interner) {
  Significant out;
  for (Token& t : tokenize(text)) {
    if (t.isTrivia()) continue;
    std::string key = std::string(tokenKindName(t.kind)) + ":" +
                      (t.kind == TokenKind::Identifier || t.kind == TokenKind::Keyword
                           ? toLower(t.text)
                           : t.text);
    auto [it, inserted] = interner.emplace(std::move(key), static_cast<uint32_t>(interner.size()));
    out.keys.push_back(it->second);
    out.tokens.push_back(std::move(t));
  }
  return out;
}

/// Recognizes one insertable statement starting at a token index.
class AnnotationParser {
 public:
  explicit AnnotationParser(const std::vector<Token>& toks)
      : toks_(toks), memo_(toks.size() + 1, kUnknown) {}

  /// End (exclusive) of the statement starting at `i`, or kNoParse.
  size_t statementEnd(size_t i) {
    if (i >= toks_.size()) return kNoParse;
    if (memo_[i] != kUnknown) return memo_[i];
    memo_[i] = kNoParse;  // guards against cycles while parsing
    size_t end = kNoParse;
    if (toks_[i].isKeyword("pragma")) {
      end = pragmaEnd(i);
    } else if (toks_[i].isKeyword("for")) {
      end = forEnd(i);
    } else if (toks_[i].isKeyword("if")) {
      end = ifEnd(i);
    }
    memo_[i] = end;
    return end;
  }

 private:
  static constexpr size_t kUnknown = static_cast<size_t>(-2);

  bool at(size_t i, std::string_view keyword) const {
    return i < toks_.size() && toks_[i].isKeyword(keyword);
  }
  bool punct(size_t i, std::string_view p) const {
    return i < toks_.size() && toks_[i].isPunct(p);
  }

  size_t pragmaEnd(size_t i) {
    size_t j = i + 1;
    if (j >= toks_.size() || toks_[j].kind != TokenKind::Identifier ||
        !isInsertablePragma(toks_[j].text)) {
      return kNoParse;
    }
    ++j;
    if (punct(j, ";")) return j + 1;
    if (!punct(j, "(")) return kNoParse;
    int depth = 0;
    for (; j < toks_.size(); ++j) {
      if (toks_[j].isPunct("(")) ++depth;
      if (toks_[j].isPunct(")") && --depth == 0) break;
      if (toks_[j].isPunct(";")) return kNoParse;
    }
    return punct(j + 1, ";") ? j + 2 : kNoParse;
  }

  // Skips a condition or loop header up to `keyword` at paren depth 0.
  size_t skipTo(size_t j, std::string_view keyword) {
    int depth = 0;
    for (; j < toks_.size(); ++j) {
      if (toks_[j].isPunct("(")) ++depth;
      if (toks_[j].isPunct(")")) --depth;
      if (depth < 0 || toks_[j].isPunct(";")) return kNoParse;
      if (depth == 0 && toks_[j].isKeyword(keyword)) return j;
      // Statements cannot appear inside a header.
      if (depth == 0 && (toks_[j].isKeyword("pragma") || toks_[j].isKeyword("loop") ||
                         toks_[j].isKeyword("then"))) {
        return kNoParse;
      }
    }
    return kNoParse;
  }

  // One or more statements, stopping before any token that cannot start one.
  size_t statementList(size_t j) {
    size_t end = statementEnd(j);
    if (end == kNoParse) return kNoParse;
    while (true) {
      size_t next = statementEnd(end);
      if (next == kNoParse) return end;
      end = next;
    }
  }

  size_t forEnd(size_t i) {
    size_t loopKw = skipTo(i + 1, "loop");
    if (loopKw == kNoParse || loopKw == i + 1) return kNoParse;
    size_t body = statementList(loopKw + 1);
    if (body == kNoParse || !at(body, "end") || !at(body + 1, "loop") || !punct(body + 2, ";")) {
      return kNoParse;
    }
    return body + 3;
  }

  size_t ifEnd(size_t i) {
    size_t thenKw = skipTo(i + 1, "then");
    if (thenKw == kNoParse || thenKw == i + 1) return kNoParse;
    size_t j = statementList(thenKw + 1);
    while (j != kNoParse && at(j, "elsif")) {
      size_t t = skipTo(j + 1, "then");
      if (t == kNoParse || t == j + 1) return kNoParse;
      j = statementList(t + 1);
    }
    if (j != kNoParse && at(j, "else")) j = statementList(j + 1);
    if (j == kNoParse || !at(j, "end") || !at(j + 1, "if") || !punct(j + 2, ";")) {
      return kNoParse;
    }
    return j + 3;
  }

  const std::vector<Token>& toks_;
  std::vector<size_t> memo_;
};

std::string excerpt(const std::vector<Token>& toks, size_t from, size_t to) {
  std::string out;
  for (size_t k = from; k < to; ++k) {
    if (!out.empty()) out += ' ';
    out += toks[k].text;
    if (out.size() > 120) {
      out += " ...";
      break;
    }
  }
  return out;
}

Span spanOf(const std::vector<Token>& toks, size_t from, size_t to) {
  return Span{toks[from].span.begin, toks[to - 1].span.end, toks[from].span.line,
              toks[from].span.column};
}

/// Explains a rejection from a longest-common-subsequence alignment.
std::vector<Violation> explainRejection(const Significant& orig, const Significant& cand,
                                        AnnotationParser& parser) {
  const size_t n = orig.keys.size();
  const size_t m = cand.keys.size();
  size_t prefix = 0;
  while (prefix < n && prefix < m && orig.keys[prefix] == cand.keys[prefix]) ++prefix;
  size_t suffix = 0;
  while (suffix < n - prefix && suffix < m - prefix &&
         orig.keys[n - 1 - suffix] == cand.keys[m - 1 - suffix]) {
    ++suffix;
  }
  const size_t rows = n - prefix - suffix;
  const size_t cols = m - prefix - suffix;
  std::vector<Violation> violations;
  if (rows * cols > 40'000'000) {
    violations.push_back(Violation{spanOf(cand.tokens, prefix, prefix + std::max<size_t>(cols, 1)),
                                   "candidate differs from the original in a region too large to "
                                   "align"});
    return violations;
  }

  // lcs[r][c] = LCS length of orig[prefix + r ..] and cand[prefix + c ..].
  std::vector<uint32_t> lcs((rows + 1) * (cols + 1), 0);
  auto L = [&](size_t r, size_t c) -> uint32_t& { return lcs[r * (cols + 1) + c]; };
  for (size_t r = rows; r-- > 0;) {
    for (size_t c = cols; c-- > 0;) {
      L(r, c) = orig.keys[prefix + r] == cand.keys[prefix + c]
                    ? L(r + 1, c + 1) + 1
                    : std::max(L(r + 1, c), L(r, c + 1));
    }
  }

  size_t r = 0;
  size_t c = 0;
  while (r < rows || c < cols) {
    if (r < rows && c < cols && orig.keys[prefix + r] == cand.keys[prefix + c]) {
      ++r;
      ++c;
      continue;
    }
    size_t delFrom = r;
    size_t insFrom = c;
    while ((r < rows || c < cols) &&
           !(r < rows && c < cols && orig.keys[prefix + r] == cand.keys[prefix + c])) {
      if (c < cols && (r == rows || L(r, c + 1) >= L(r + 1, c))) {
        ++c;
      } else {
        ++r;
      }
    }
    if (r > delFrom) {
      std::string what = c > insFrom ? "original code replaced: " : "original code deleted: ";
      violations.push_back(Violation{spanOf(orig.tokens, prefix + delFrom, prefix + r),
                                     what + excerpt(orig.tokens, prefix + delFrom, prefix + r)});
    } else if (c > insFrom) {
      // Is the inserted run a chain of allowed statements?
      size_t pos = prefix + insFrom;
      size_t stop = prefix + c;
      while (pos < stop) {
        size_t next = parser.statementEnd(pos);
        if (next == kNoParse || next > stop) break;
        pos = next;
      }
      if (pos != stop) {
        violations.push_back(
            Violation{spanOf(cand.tokens, prefix + insFrom, stop),
                      "inserted code is not an annotation: " +
                          excerpt(cand.tokens, prefix + insFrom, stop)});
      }
    }
  }
  if (violations.empty()) {
    violations.push_back(Violation{Span{}, "no alignment keeps every inserted region legal"});
  }
  return violations;
}

}  // namespace

std::string_view extractionName(Extraction e) {
  return e == Extraction::AdaFence ? "ada_fence" : "generic_fence";
}

std::optional<Candidate> extractCode(std::string_view response, CandidateOrigin origin) {
  std::optional<std::string> lastAda;
  std::optional<std::string> lastUntagged;
  std::optional<std::string> info;
  std::string content;
  size_t start = 0;
  while (start <= response.size()) {
    size_t end = response.find('\n', start);
    if (end == std::string_view::npos) end = response.size();
    std::string_view line = response.substr(start, end - start);
    std::string_view stripped = trimLeft(line);
    if (!info) {
      if (stripped.substr(0, 3) == "```") {
        info = std::string(trim(stripped.substr(3)));
        content.clear();
      }
    } else if (trim(stripped) == "```") {
      if (equalsIgnoreCase(*info, "ada")) {
        lastAda = content;
      } else if (info->empty()) {
        lastUntagged = content;
      }
      info.reset();
    } else {
      content += line;
      content += '\n';
    }
    if (end == response.size()) break;
    start = end + 1;
  }

  auto finish = [&](std::string body, Extraction how) -> std::optional<Candidate> {
    if (!body.empty() && body.back() == '\n') body.pop_back();
    if (trim(body).empty()) return std::nullopt;
    return Candidate{std::move(body), origin, how};
  };
  if (lastAda) return finish(*lastAda, Extraction::AdaFence);
  if (lastUntagged) return finish(*lastUntagged, Extraction::GenericFence);
  return std::nullopt;
}

bool isInsertablePragma(std::string_view name) {
  for (std::string_view allowed : {"Loop_Invariant", "Loop_Variant", "Assert", "Assert_And_Cut"}) {
    if (equalsIgnoreCase(name, allowed)) return true;
  }
  return false;
}

ValidationResult validateDiff(std::string_view original, std::string_view candidate) {
  std::unordered_map<std::string, uint32_t> interner;
  Significant orig = significantTokens(original, interner);
  Significant cand = significantTokens(candidate, interner);
  AnnotationParser parser(cand.tokens);

  ValidationResult result;
  if (cand.tokens.empty()) {
    result.violations.push_back(Violation{Span{}, "unparseable: candidate has no code"});
    return result;
  }

  const size_t n = orig.keys.size();
  const size_t m = cand.keys.size();
  if (m >= n) {
    // reach[i][d]: orig[i..] embeds into cand[i + d ..] with every gap a
    // chain of insertable statements. All such embeddings are minimal edit
    // scripts (exactly m - n insertions), so any of them will do.
    const size_t slack = m - n;
    std::vector<uint8_t> reach((n + 1) * (slack + 1), 0);
    auto R = [&](size_t i, size_t j) -> uint8_t& { return reach[i * (slack + 1) + (j - i)]; };

    // Can orig[i] be matched at cand[k] (or, at the end, is k the end)?
    auto lands = [&](size_t i, size_t k) {
      if (i == n) return k == m;
      return k < m && k - i <= slack && orig.keys[i] == cand.keys[k] && R(i + 1, k + 1) != 0;
    };
    // First gap end reachable from j through whole insertable statements.
    auto firstLanding = [&](size_t i, size_t j) -> size_t {
      for (size_t k = j; k != kNoParse && k - i <= slack; k = parser.statementEnd(k)) {
        if (lands(i, k)) return k;
      }
      return kNoParse;
    };
    for (size_t i = n + 1; i-- > 0;) {
      for (size_t j = std::min(m, i + slack) + 1; j-- > i;) {
        R(i, j) = firstLanding(i, j) != kNoParse;
      }
    }

    if (R(0, 0)) {
      size_t j = 0;
      for (size_t i = 0; i <= n; ++i) {
        size_t k = firstLanding(i, j);
        if (k > j) {
          result.insertedRegions.push_back(
              InsertedRegion{spanOf(cand.tokens, j, k), excerpt(cand.tokens, j, k)});
        }
        j = k + 1;
      }
      result.verdict = ValidationResult::Verdict::Accepted;
      return result;
    }
  }

  result.violations = explainRejection(orig, cand, parser);
  return result;
}

}  // namespace pragmasmith
