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

#include "pragmasmith/ada_lex.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "pragmasmith/common.hpp"

namespace pragmasmith {
namespace {

constexpr std::array<std::string_view, 74> kReservedWords = {
    "abort",     "abs",       "abstract",  "accept",    "access",     "aliased",
    "all",       "and",       "array",     "at",        "begin",      "body",
    "case",      "constant",  "declare",   "delay",     "delta",      "digits",
    "do",        "else",      "elsif",     "end",       "entry",      "exception",
    "exit",      "for",       "function",  "generic",   "goto",       "if",
    "in",        "interface", "is",        "limited",   "loop",       "mod",
    "new",       "not",       "null",      "of",        "or",         "others",
    "out",       "overriding", "package",  "parallel",  "pragma",     "private",
    "procedure", "protected", "raise",     "range",     "record",     "rem",
    "renames",   "requeue",   "return",    "reverse",   "select",     "separate",
    "some",      "subtype",   "synchronized", "tagged", "task",       "terminate",
    "then",      "type",      "until",     "use",       "when",       "while",
    "with",      "xor",
};

constexpr std::array<std::string_view, 10> kCompoundDelimiters = {
    "=>", "..", "**", ":=", "/=", ">=", "<=", "<<", ">>", "<>",
};

bool isLetter(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}
bool isDigit(unsigned char c) { return c >= '0' && c <= '9'; }
bool isExtendedDigit(unsigned char c) {
  return isDigit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}
bool isIdentifierChar(unsigned char c) { return isLetter(c) || isDigit(c) || c == '_'; }
bool isBlank(unsigned char c) { return c == ' ' || c == '\t' || c == '\f' || c == '\v'; }

class Lexer {
 public:
  explicit Lexer(std::string_view source) : src_(source) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (pos_ < src_.size()) {
      size_t start = pos_;
      TokenKind kind = lexOne(tokens);
      tokens.push_back(Token{kind, std::string(src_.substr(start, pos_ - start)),
                             Span{start, pos_, line_, column_}});
      advancePosition(start, pos_);
    }
    return tokens;
  }

 private:
  TokenKind lexOne(const std::vector<Token>& previous) {
    unsigned char c = static_cast<unsigned char>(src_[pos_]);
    if (c == '\n') {
      ++pos_;
      return TokenKind::Newline;
    }
    if (c == '\r') {
      ++pos_;
      if (pos_ < src_.size() && src_[pos_] == '\n') ++pos_;
      return TokenKind::Newline;
    }
    if (isBlank(c)) {
      while (pos_ < src_.size() && isBlank(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return TokenKind::Whitespace;
    }
    if (c == '-' && peek(1) == '-') {
      while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') ++pos_;
      return TokenKind::Comment;
    }
    if (isLetter(c)) {
      size_t start = pos_;
      while (pos_ < src_.size() && isIdentifierChar(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
      }
      return isAdaReservedWord(src_.substr(start, pos_ - start)) ? TokenKind::Keyword
                                                                 : TokenKind::Identifier;
    }
    if (isDigit(c)) {
      lexNumber();
      return TokenKind::NumericLiteral;
    }
    if (c == '"') {
      lexString();
      return TokenKind::StringLiteral;
    }
    if (c == '\'' && !tickIsAttribute(previous) && peek(2) == '\'' && peek(1) != '\n') {
      pos_ += 3;
      return TokenKind::CharacterLiteral;
    }
    for (std::string_view delim : kCompoundDelimiters) {
      if (src_.substr(pos_, delim.size()) == delim) {
        pos_ += delim.size();
        return TokenKind::Punctuation;
      }
    }
    ++pos_;
    return TokenKind::Punctuation;
  }

  char peek(size_t offset) const {
    return pos_ + offset < src_.size() ? src_[pos_ + offset] : '\0';
  }

  // A tick after a name or closing parenthesis starts an attribute
  // (A'First, F (X)'Old); elsewhere it may open a character literal.
  static bool tickIsAttribute(const std::vector<Token>& previous) {
    for (auto it = previous.rbegin(); it != previous.rend(); ++it) {
      if (it->isTrivia()) continue;
      if (it->kind == TokenKind::Identifier) return true;
      if (it->isPunct(")")) return true;
      if (it->kind == TokenKind::Keyword && equalsIgnoreCase(it->text, "all")) return true;
      return false;
    }
    return false;
  }

  void lexNumber() {
    auto digits = [&](bool extended) {
      while (pos_ < src_.size()) {
        unsigned char d = static_cast<unsigned char>(src_[pos_]);
        if ((extended ? isExtendedDigit(d) : isDigit(d)) || d == '_') {
          ++pos_;
        } else {
          break;
        }
      }
    };
    digits(false);
    if (peek(0) == '#') {
      ++pos_;
      digits(true);
      if (peek(0) == '.' && isExtendedDigit(static_cast<unsigned char>(peek(1)))) {
        ++pos_;
        digits(true);
      }
      if (peek(0) == '#') ++pos_;
    } else if (peek(0) == '.' && isDigit(static_cast<unsigned char>(peek(1)))) {
      ++pos_;
      digits(false);
    }
    if ((peek(0) == 'e' || peek(0) == 'E') &&
        (isDigit(static_cast<unsigned char>(peek(1))) ||
         ((peek(1) == '+' || peek(1) == '-') && isDigit(static_cast<unsigned char>(peek(2)))))) {
      pos_ += 2;
      digits(false);
    }
  }

  // Strings end at the closing quote ("" is an escaped quote) or, when
  // unterminated, at end of line so a stray quote cannot swallow the file.
  void lexString() {
    ++pos_;
    while (pos_ < src_.size()) {
      char ch = src_[pos_];
      if (ch == '\n' || ch == '\r') return;
      ++pos_;
      if (ch == '"') {
        if (peek(0) == '"') {
          ++pos_;
          continue;
        }
        return;
      }
    }
  }

  void advancePosition(size_t from, size_t to) {
    for (size_t i = from; i < to; ++i) {
      if (src_[i] == '\n' || (src_[i] == '\r' && (i + 1 >= src_.size() || src_[i + 1] != '\n'))) {
        ++line_;
        column_ = 1;
      } else if (src_[i] != '\r') {
        ++column_;
      }
    }
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

Span spanBetween(const Token& first, const Token& last) {
  return Span{first.span.begin, last.span.end, first.span.line, first.span.column};
}

// Tokens that end the previous statement (or open a statement list), used to
// find where a loop header begins.
bool endsPrecedingStatement(const Token& tok) {
  if (tok.isPunct(";") || tok.isPunct("=>")) return true;
  if (tok.kind != TokenKind::Keyword) return false;
  for (std::string_view word : {"begin", "loop", "then", "else", "is", "do", "declare"}) {
    if (equalsIgnoreCase(tok.text, word)) return true;
  }
  return false;
}

struct OpenLoop {
  int index;
};

}  // namespace

bool Token::isKeyword(std::string_view word) const {
  return kind == TokenKind::Keyword && equalsIgnoreCase(text, word);
}

std::string_view tokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::StringLiteral: return "string-literal";
    case TokenKind::CharacterLiteral: return "character-literal";
    case TokenKind::NumericLiteral: return "numeric-literal";
    case TokenKind::Comment: return "comment";
    case TokenKind::Punctuation: return "punctuation";
    case TokenKind::Whitespace: return "whitespace";
    case TokenKind::Newline: return "newline";
  }
  return "unknown";
}

bool isAdaReservedWord(std::string_view word) {
  return std::any_of(kReservedWords.begin(), kReservedWords.end(),
                     [&](std::string_view w) { return equalsIgnoreCase(w, word); });
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

std::string render(std::span<const Token> tokens) {
  std::string out;
  for (const Token& tok : tokens) out += tok.text;
  return out;
}

std::string_view pragmaKindName(PragmaKind kind) {
  switch (kind) {
    case PragmaKind::LoopInvariant: return "Loop_Invariant";
    case PragmaKind::LoopVariant: return "Loop_Variant";
    case PragmaKind::Assert: return "Assert";
    case PragmaKind::Other: return "Other";
  }
  return "Other";
}

PragmaKind pragmaKindFromName(std::string_view name) {
  if (equalsIgnoreCase(name, "Loop_Invariant")) return PragmaKind::LoopInvariant;
  if (equalsIgnoreCase(name, "Loop_Variant")) return PragmaKind::LoopVariant;
  if (equalsIgnoreCase(name, "Assert")) return PragmaKind::Assert;
  return PragmaKind::Other;
}

StructureMap scanStructure(std::string_view source) {
  std::vector<Token> all = tokenize(source);
  std::vector<const Token*> toks;
  for (const Token& t : all) {
    if (!t.isTrivia()) toks.push_back(&t);
  }

  StructureMap map;
  map.sourceDigest = sha256Hex(source);
  std::vector<OpenLoop> open;
  // Sites per innermost loop (-1 for top level) and kind, for ordinals.
  std::map<std::pair<int, PragmaKind>, int> ordinals;

  for (size_t i = 0; i < toks.size(); ++i) {
    const Token& tok = *toks[i];
    if (tok.isKeyword("end") && i + 1 < toks.size() && toks[i + 1]->isKeyword("loop")) {
      if (open.empty()) {
        throw Error(ErrorCode::UnbalancedLoop, "'end loop' without an open loop at line " +
                                                   std::to_string(tok.span.line));
      }
      size_t j = i + 2;
      while (j < toks.size() && !toks[j]->isPunct(";")) ++j;
      if (j == toks.size()) {
        throw Error(ErrorCode::UnbalancedLoop,
                    "unterminated 'end loop' at line " + std::to_string(tok.span.line));
      }
      LoopRegion& region = map.loops[open.back().index];
      region.span.end = toks[j]->span.end;
      open.pop_back();
      i = j;
      continue;
    }
    if (tok.isKeyword("loop")) {
      // Walk back to the start of the statement the header belongs to.
      size_t start = i;
      while (start > 0 && !endsPrecedingStatement(*toks[start - 1])) --start;
      LoopHeader header = LoopHeader::Bare;
      for (size_t k = start; k < i; ++k) {
        if (toks[k]->isKeyword("for")) {
          header = LoopHeader::For;
          break;
        }
        if (toks[k]->isKeyword("while")) {
          header = LoopHeader::While;
          break;
        }
      }
      LoopRegion region;
      region.index = static_cast<int>(map.loops.size());
      region.header = header;
      region.span = toks[start]->span;
      region.depth = static_cast<int>(open.size());
      map.loops.push_back(region);
      open.push_back(OpenLoop{region.index});
      continue;
    }
    if (tok.isKeyword("pragma")) {
      if (i + 1 >= toks.size() || toks[i + 1]->kind != TokenKind::Identifier) {
        throw Error(ErrorCode::MalformedPragma,
                    "pragma without a name at line " + std::to_string(tok.span.line));
      }
      int depth = 0;
      size_t j = i + 2;
      for (; j < toks.size(); ++j) {
        if (toks[j]->isPunct("(")) ++depth;
        if (toks[j]->isPunct(")")) {
          if (--depth < 0) break;
        }
        if (toks[j]->isPunct(";") && depth == 0) break;
      }
      if (j == toks.size() || depth != 0) {
        throw Error(ErrorCode::MalformedPragma,
                    "unbalanced pragma at line " + std::to_string(tok.span.line));
      }
      PragmaSite site;
      site.name = toks[i + 1]->text;
      site.kind = pragmaKindFromName(site.name);
      site.span = spanBetween(tok, *toks[j]);
      for (const OpenLoop& l : open) site.loopPath.push_back(l.index);
      site.ordinalInLoop = ordinals[{site.innermostLoop(), site.kind}]++;
      if (site.kind == PragmaKind::LoopInvariant && !open.empty()) {
        ++map.loops[open.back().index].invariantCount;
      }
      map.sites.push_back(std::move(site));
      i = j;
      continue;
    }
  }
  if (!open.empty()) {
    const LoopRegion& region = map.loops[open.back().index];
    throw Error(ErrorCode::UnbalancedLoop,
                "loop at line " + std::to_string(region.span.line) + " has no 'end loop'");
  }
  return map;
}

std::vector<Deletion> planRemoval(std::string_view source, std::span<const PragmaSite> sites) {
  std::vector<char> removed(source.size(), 0);
  for (const PragmaSite& site : sites) {
    if (site.span.end > source.size() || site.span.begin > site.span.end) {
      throw Error(ErrorCode::StaleSites, "site span lies outside the source");
    }
    std::fill(removed.begin() + static_cast<std::ptrdiff_t>(site.span.begin),
              removed.begin() + static_cast<std::ptrdiff_t>(site.span.end), 1);
  }

  // Widen to whole lines left blank by the removal.
  size_t lineStart = 0;
  while (lineStart < source.size()) {
    size_t lineEnd = source.find('\n', lineStart);
    size_t contentEnd = lineEnd == std::string_view::npos ? source.size() : lineEnd;
    size_t next = lineEnd == std::string_view::npos ? source.size() : lineEnd + 1;
    bool touched = false;
    bool blankRemainder = true;
    for (size_t k = lineStart; k < contentEnd; ++k) {
      if (removed[k]) {
        touched = true;
      } else if (!isBlank(static_cast<unsigned char>(source[k])) && source[k] != '\r') {
        blankRemainder = false;
      }
    }
    if (touched && blankRemainder) {
      std::fill(removed.begin() + static_cast<std::ptrdiff_t>(lineStart),
                removed.begin() + static_cast<std::ptrdiff_t>(next), 1);
    }
    lineStart = next;
  }

  std::vector<Deletion> plan;
  for (size_t k = 0; k < source.size();) {
    if (!removed[k]) {
      ++k;
      continue;
    }
    size_t end = k;
    while (end < source.size() && removed[end]) ++end;
    plan.push_back(Deletion{k, std::string(source.substr(k, end - k))});
    k = end;
  }
  return plan;
}

std::string applyDeletions(std::string_view source, std::span<const Deletion> deletions) {
  std::string out;
  out.reserve(source.size());
  size_t cursor = 0;
  for (const Deletion& d : deletions) {
    out.append(source.substr(cursor, d.offset - cursor));
    cursor = d.offset + d.text.size();
  }
  out.append(source.substr(cursor));
  return out;
}

std::string restoreDeletions(std::string_view mutated, std::span<const Deletion> deletions) {
  std::string out;
  out.reserve(mutated.size());
  size_t cursor = 0;
  for (const Deletion& d : deletions) {
    // d.offset is in original coordinates; everything before it is already out.
    size_t take = d.offset - out.size();
    out.append(mutated.substr(cursor, take));
    cursor += take;
    out += d.text;
  }
  out.append(mutated.substr(cursor));
  return out;
}

std::string removeSites(std::string_view source, const StructureMap& map,
                        std::span<const PragmaSite> sites) {
  if (sha256Hex(source) != map.sourceDigest) {
    throw Error(ErrorCode::StaleSites, "structure map was scanned from a different source");
  }
  for (const PragmaSite& site : sites) {
    if (std::find(map.sites.begin(), map.sites.end(), site) == map.sites.end()) {
      throw Error(ErrorCode::StaleSites, "site at line " + std::to_string(site.span.line) +
                                             " is not part of the structure map");
    }
  }
  std::vector<Deletion> plan = planRemoval(source, sites);
  return applyDeletions(source, plan);
}

}  // namespace pragmasmith
