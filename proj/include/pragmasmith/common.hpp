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

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pragmasmith {

enum class ErrorCode {
  UnbalancedLoop,
  MalformedPragma,
  StaleSites,
  ProverFailure,
  ToolNotFound,
  CassetteMiss,
  PreconditionViolation,
  AuthError,
  RateLimited,
  ScriptExhausted,
  CapExceeded,
  UnknownCase,
  ProviderFailure,
  Io,
  Config,
};

std::string_view errorCodeName(ErrorCode code);

/// Every failure surfaced by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(errorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Lowercase hex SHA-256 of the given bytes.
std::string sha256Hex(std::string_view bytes);

std::string readFile(const std::filesystem::path& path);
void writeFile(const std::filesystem::path& path, std::string_view contents);

/// ASCII case folding; Ada identifiers and keywords compare this way.
std::string toLower(std::string_view text);
bool equalsIgnoreCase(std::string_view lhs, std::string_view rhs);

}  // namespace pragmasmith
