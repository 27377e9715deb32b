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

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pragmasmith {

struct ProcessResult {
  int exitStatus = 0;
  /// stdout and stderr, interleaved as the child wrote them.
  std::string output;
  bool timedOut = false;
  double seconds = 0.0;
};

/// Resolves `program` against PATH (or checks it directly when it contains a
/// slash). Returns nullopt when nothing executable is found.
std::optional<std::filesystem::path> findExecutable(const std::string& program);

/// Runs argv[0] with the given arguments in `workdir`, capturing merged
/// output. A child still running at `timeout` is killed along with its
/// process group. Throws Error(ToolNotFound) when argv[0] cannot be executed.
ProcessResult runProcess(const std::vector<std::string>& argv,
                         const std::filesystem::path& workdir,
                         std::chrono::milliseconds timeout);

/// A fresh private directory, removed recursively on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& prefix = "pragmasmith");
  ~ScratchDir();
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace pragmasmith
