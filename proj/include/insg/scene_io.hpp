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

// Versioned JSON formats for taxonomies and scenes.
//
// Taxonomy file:
//   {"version": 1, "coarse": [names], "fine": [names],
//    "fine_to_coarse": {fine name: coarse name}, "predicates": [names]}
//
// Scene file:
//   {"version": 1, "taxonomy_hash": "<16 hex digits>",
//    "instances": [{"id": int, "points": [x0, y0, z0, x1, ...]}],
//    "labels": [{"id": int, "fine": int, "coarse": int}],
//    "triplets": [[subject, object, predicate], ...],
//    "skeleton": [[subject, object], ...]}
//
// Triplets and skeleton edges are sorted; the skeleton must equal the
// or-reduction of the triplets.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "insg/scene.hpp"

namespace insg {

inline constexpr int kFormatVersion = 1;

std::string hash_hex(std::uint64_t h);

nlohmann::json taxonomy_to_json(const Taxonomy& t);
Taxonomy taxonomy_from_json(const nlohmann::json& j);
void save_taxonomy(const Taxonomy& t, const std::filesystem::path& path);
Taxonomy load_taxonomy(const std::filesystem::path& path);

nlohmann::json scene_to_json(const SceneSample& s, const Taxonomy& t);
SceneSample scene_from_json(const nlohmann::json& j, const Taxonomy& t);
void save_scene(const SceneSample& s, const Taxonomy& t, const std::filesystem::path& path);
SceneSample load_scene(const std::filesystem::path& path, const Taxonomy& t);

// Dataset directory: taxonomy.json plus scene_00000.json, scene_00001.json,
// ... Scenes load in file-name order.
inline constexpr const char* kTaxonomyFile = "taxonomy.json";
std::string scene_file_name(int index);

struct Dataset {
  Taxonomy taxonomy;
  std::vector<SceneSample> scenes;
};
void save_dataset(const Dataset& d, const std::filesystem::path& dir);
// Throws ConfigError when `dir` is not a directory, FormatError on bad files.
Dataset load_dataset(const std::filesystem::path& dir);

// Parses a JSON document, mapping syntax errors to FormatError with the byte
// offset reported by the parser.
nlohmann::json parse_json(const std::string& text, const std::string& origin);
nlohmann::json read_json_file(const std::filesystem::path& path);
// Writes `j.dump(indent)` plus a trailing newline.
void write_json_file(const nlohmann::json& j, const std::filesystem::path& path, int indent = -1);

}  // namespace insg
