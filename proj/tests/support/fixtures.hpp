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

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

namespace pragmasmith::testing {

inline std::filesystem::path fixturesDir() { return PRAGMASMITH_FIXTURES_DIR; }
inline std::filesystem::path corpusDir() { return fixturesDir() / "corpus"; }
inline std::filesystem::path fixtureManifest() { return fixturesDir() / "manifest.json"; }
inline std::filesystem::path fixtureCassette() { return fixturesDir() / "cassettes" / "prover.json"; }
inline std::filesystem::path fakeGnatprove() { return PRAGMASMITH_FAKE_GNATPROVE; }

/// Copies one corpus program into `dest` and returns the copy's root.
inline std::filesystem::path copyProgram(const std::string& name,
                                         const std::filesystem::path& dest) {
  std::filesystem::path root = dest / name;
  std::filesystem::create_directories(root);
  std::filesystem::copy(corpusDir() / name, root, std::filesystem::copy_options::recursive);
  return root;
}

/// Every regular file of the fixture corpus, sorted.
inline std::vector<std::filesystem::path> corpusFiles() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(corpusDir())) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

inline constexpr const char* kDoubleNumber =
    "procedure Double_Number (X : in Natural; Result : out Natural) is\n"
    "   Count : Natural := 0;\n"
    "begin\n"
    "   Result := 0;\n"
    "   while Count < X loop\n"
    "      pragma Loop_Invariant (Result = Count * 2);\n"
    "      pragma Loop_Invariant (Count < X);\n"
    "      Result := Result + 2;\n"
    "      Count := Count + 1;\n"
    "   end loop;\n"
    "end Double_Number;\n";

/// Double_Number with both invariants removed, as a person would have edited it.
inline constexpr const char* kDoubleNumberMutated =
    "procedure Double_Number (X : in Natural; Result : out Natural) is\n"
    "   Count : Natural := 0;\n"
    "begin\n"
    "   Result := 0;\n"
    "   while Count < X loop\n"
    "      Result := Result + 2;\n"
    "      Count := Count + 1;\n"
    "   end loop;\n"
    "end Double_Number;\n";

}  // namespace pragmasmith::testing
