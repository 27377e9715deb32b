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
#include <map>
#include <string>
#include <vector>

namespace pragmasmith {

/// A verified SPARK project on disk. File lists are relative to `root`.
struct SparkProject {
  std::string name;
  std::filesystem::path root;
  std::string projectFile;
  std::vector<std::string> specFiles;
  std::vector<std::string> bodyFiles;
  std::string targetBody;

  /// Project file plus every spec and body, sorted.
  std::vector<std::string> allFiles() const;

  bool operator==(const SparkProject&) const = default;
};

/// Replacement contents keyed by project-relative path.
using Overlay = std::map<std::string, std::string>;

/// Builds a project from a directory holding exactly one `.gpr` file.
/// The target body is `<gpr stem>.adb` when present, otherwise the only
/// `.adb`; `targetOverride` takes precedence when non-empty.
SparkProject discoverProject(const std::filesystem::path& root,
                             const std::string& targetOverride = {});

/// Checks the SparkProject invariants; throws Error(PreconditionViolation).
void validateProject(const SparkProject& project);

}  // namespace pragmasmith
