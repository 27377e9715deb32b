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

#include "pragmasmith/project.hpp"

#include <algorithm>

#include "pragmasmith/common.hpp"

namespace fs = std::filesystem;

namespace pragmasmith {

std::vector<std::string> SparkProject::allFiles() const {
  std::vector<std::string> files;
  files.push_back(projectFile);
  files.insert(files.end(), specFiles.begin(), specFiles.end());
  files.insert(files.end(), bodyFiles.begin(), bodyFiles.end());
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  return files;
}

SparkProject discoverProject(const fs::path& root, const std::string& targetOverride) {
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::Io, root.string() + " is not a directory");
  }
  SparkProject project;
  project.root = fs::absolute(root).lexically_normal();
  std::vector<std::string> gprs;
  for (const auto& entry : fs::recursive_directory_iterator(project.root)) {
    if (!entry.is_regular_file()) continue;
    std::string rel = fs::relative(entry.path(), project.root).generic_string();
    // Build products never belong to the sources.
    if (rel.rfind("obj/", 0) == 0) continue;
    std::string ext = toLower(entry.path().extension().string());
    if (ext == ".gpr") gprs.push_back(rel);
    if (ext == ".ads") project.specFiles.push_back(rel);
    if (ext == ".adb") project.bodyFiles.push_back(rel);
  }
  if (gprs.size() != 1) {
    throw Error(ErrorCode::Config, root.string() + ": expected exactly one .gpr file, found " +
                                       std::to_string(gprs.size()));
  }
  project.projectFile = gprs.front();
  project.name = fs::path(project.projectFile).stem().string();
  std::sort(project.specFiles.begin(), project.specFiles.end());
  std::sort(project.bodyFiles.begin(), project.bodyFiles.end());

  if (!targetOverride.empty()) {
    project.targetBody = targetOverride;
  } else {
    std::string preferred = toLower(project.name) + ".adb";
    for (const std::string& body : project.bodyFiles) {
      if (toLower(fs::path(body).filename().string()) == preferred) project.targetBody = body;
    }
    if (project.targetBody.empty() && project.bodyFiles.size() == 1) {
      project.targetBody = project.bodyFiles.front();
    }
    if (project.targetBody.empty()) {
      throw Error(ErrorCode::Config,
                  root.string() + ": cannot choose a target body; name one explicitly");
    }
  }
  validateProject(project);
  return project;
}

void validateProject(const SparkProject& project) {
  if (std::find(project.bodyFiles.begin(), project.bodyFiles.end(), project.targetBody) ==
      project.bodyFiles.end()) {
    throw Error(ErrorCode::PreconditionViolation,
                "target body " + project.targetBody + " is not among the project bodies");
  }
  for (const std::string& file : project.allFiles()) {
    if (!fs::is_regular_file(project.root / file)) {
      throw Error(ErrorCode::PreconditionViolation,
                  "missing project file " + (project.root / file).string());
    }
  }
}

}  // namespace pragmasmith
