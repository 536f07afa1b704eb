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

#include "insg/manifest.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>

#include "insg/errors.hpp"
#include "insg/rng.hpp"
#include "insg/scene_io.hpp"

#ifndef INSG_VERSION
#define INSG_VERSION "0.1.0"
#endif

namespace insg {

const char* version_string() { return INSG_VERSION; }

std::int64_t manifest_timestamp() {
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0) return v;
  }
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string format_utc(std::int64_t seconds) {
  const std::time_t t = static_cast<std::time_t>(seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string config_hash(const nlohmann::json& config) { return hash_hex(fnv1a64(config.dump())); }

nlohmann::json to_json(const RunManifest& m) {
  return {{"version", 1},
          {"command", m.command},
          {"config_hash", m.config_hash},
          {"seed", m.seed},
          {"taxonomy_hash", m.taxonomy_hash},
          {"insg_version", m.version},
          {"started", m.started},
          {"finished", m.finished},
          {"extra", m.extra}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  try {
    RunManifest m;
    if (j.at("version").get<int>() != 1) throw FormatError("manifest: unsupported version");
    m.command = j.at("command").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.taxonomy_hash = j.at("taxonomy_hash").get<std::string>();
    m.version = j.at("insg_version").get<std::string>();
    m.started = j.at("started").get<std::string>();
    m.finished = j.at("finished").get<std::string>();
    m.extra = j.value("extra", nlohmann::json::object());
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
}

void write_manifest(const RunManifest& m, const std::filesystem::path& dir) {
  write_json_file(to_json(m), dir / kManifestFile, 2);
}

}  // namespace insg
