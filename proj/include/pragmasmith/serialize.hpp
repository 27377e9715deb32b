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

// JSON mappings for the persisted formats (manifest, outcome log).

#pragma once

#include <filesystem>

#include "json.hpp"
#include "pragmasmith/benchgen.hpp"
#include "pragmasmith/prover.hpp"

namespace pragmasmith {

nlohmann::json diagnosticToJson(const Diagnostic& d);
Diagnostic diagnosticFromJson(const nlohmann::json& j);

nlohmann::json reportToJson(const ProofReport& report);
ProofReport reportFromJson(const nlohmann::json& j);

nlohmann::json siteToJson(const PragmaSite& site);
PragmaSite siteFromJson(const nlohmann::json& j);

nlohmann::json manifestToJson(const Manifest& manifest, const std::filesystem::path& base);
Manifest manifestFromJson(const nlohmann::json& doc, const std::filesystem::path& base,
                          bool verifyDigests);

}  // namespace pragmasmith
