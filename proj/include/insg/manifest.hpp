// Copyright 2026 The insg Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Provenance record written next to every artifact set.

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"

namespace insg {

inline constexpr const char* kManifestFile = "manifest.json";

// Version string baked in at build time ("0.1.0" or a git describe output).
const char* version_string();

// Seconds since the epoch: SOURCE_DATE_EPOCH when set and valid, else the
// wall clock.
std::int64_t manifest_timestamp();
std::string format_utc(std::int64_t seconds);

struct RunManifest {
  std::string command;
  std::string config_hash;    // 16 hex digits over the canonical config JSON
  std::uint64_t seed = 0;
  std::string taxonomy_hash;  // 16 hex digits
  std::string version;
  std::string started;        // ISO-8601 UTC
  std::string finished;
  nlohmann::json extra = nlohmann::json::object();
};

std::string config_hash(const nlohmann::json& config);

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);
void write_manifest(const RunManifest& m, const std::filesystem::path& dir);

}  // namespace insg
