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

#include "insg/scene_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "insg/errors.hpp"

namespace insg {

using nlohmann::json;

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

const json& require(const json& j, const char* key, json::value_t type) {
  if (!j.is_object()) throw FormatError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing key '") + key + "'");
  const bool ok = it->type() == type ||
                  (type == json::value_t::number_integer &&
                   it->type() == json::value_t::number_unsigned);
  if (!ok) throw FormatError(std::string("wrong type for key '") + key + "'");
  return *it;
}

void require_version(const json& j) {
  const json& v = require(j, "version", json::value_t::number_integer);
  if (v.get<int>() != kFormatVersion) {
    throw FormatError("unsupported format version " + v.dump());
  }
}

std::vector<std::string> string_list(const json& j, const char* key) {
  const json& arr = require(j, key, json::value_t::array);
  std::vector<std::string> out;
  for (const json& e : arr) {
    if (!e.is_string()) throw FormatError(std::string("non-string entry in '") + key + "'");
    out.push_back(e.get<std::string>());
  }
  return out;
}

int int_in(const json& e, int lo, int hi, const char* what) {
  if (!e.is_number_integer()) throw FormatError(std::string(what) + ": expected integer");
  const long long v = e.get<long long>();
  if (v < lo || v >= hi) throw FormatError(std::string(what) + " out of range");
  return static_cast<int>(v);
}

}  // namespace

json taxonomy_to_json(const Taxonomy& t) {
  json map = json::object();
  for (std::size_t f = 0; f < t.fine_classes.size(); ++f) {
    map[t.fine_classes[f]] = t.coarse_classes.at(t.fine_to_coarse.at(f));
  }
  return json{{"version", kFormatVersion},
              {"coarse", t.coarse_classes},
              {"fine", t.fine_classes},
              {"fine_to_coarse", map},
              {"predicates", t.predicate_classes}};
}

Taxonomy taxonomy_from_json(const json& j) {
  require_version(j);
  Taxonomy t;
  t.coarse_classes = string_list(j, "coarse");
  t.fine_classes = string_list(j, "fine");
  t.predicate_classes = string_list(j, "predicates");
  const json& map = require(j, "fine_to_coarse", json::value_t::object);
  for (const auto& fine : t.fine_classes) {
    auto it = map.find(fine);
    if (it == map.end() || !it->is_string()) {
      throw FormatError("fine_to_coarse has no entry for '" + fine + "'");
    }
    auto c = std::find(t.coarse_classes.begin(), t.coarse_classes.end(), it->get<std::string>());
    if (c == t.coarse_classes.end()) {
      throw FormatError("fine_to_coarse maps '" + fine + "' to an unknown coarse class");
    }
    t.fine_to_coarse.push_back(static_cast<int>(c - t.coarse_classes.begin()));
  }
  if (map.size() != t.fine_classes.size()) throw FormatError("fine_to_coarse has extra keys");
  try {
    t.validate();
  } catch (const ConfigError& e) {
    throw FormatError(e.what());
  }
  return t;
}

void save_taxonomy(const Taxonomy& t, const std::filesystem::path& path) {
  write_json_file(taxonomy_to_json(t), path, 2);
}

Taxonomy load_taxonomy(const std::filesystem::path& path) {
  return taxonomy_from_json(read_json_file(path));
}

json scene_to_json(const SceneSample& s, const Taxonomy& t) {
  json instances = json::array();
  json labels = json::array();
  for (int i = 0; i < s.size(); ++i) {
    const Instance& inst = s.instances[i];
    std::vector<double> flat;
    flat.reserve(inst.points.size() * 3);
    for (const Vec3& p : inst.points) flat.insert(flat.end(), p.begin(), p.end());
    instances.push_back({{"id", inst.id}, {"points", std::move(flat)}});
    labels.push_back({{"id", inst.id}, {"fine", s.gt_fine[i]}, {"coarse", s.gt_coarse[i]}});
  }
  json triplets = json::array();
  json skeleton = json::array();
  const int n = s.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int p = 0; p < s.gt_predicates.num_predicates(); ++p) {
        if (s.gt_predicates.get(i, j, p)) triplets.push_back({i, j, p});
      }
      if (s.skeleton.get(i, j)) skeleton.push_back({i, j});
    }
  }
  return json{{"version", kFormatVersion},
              {"taxonomy_hash", hash_hex(t.hash())},
              {"instances", std::move(instances)},
              {"labels", std::move(labels)},
              {"triplets", std::move(triplets)},
              {"skeleton", std::move(skeleton)}};
}

SceneSample scene_from_json(const json& j, const Taxonomy& t) {
  require_version(j);
  const std::string hash = require(j, "taxonomy_hash", json::value_t::string).get<std::string>();
  if (hash != hash_hex(t.hash())) {
    throw FormatError("taxonomy mismatch: scene has " + hash + ", expected " + hash_hex(t.hash()));
  }
  const json& insts = require(j, "instances", json::value_t::array);
  const json& labels = require(j, "labels", json::value_t::array);
  const int n = static_cast<int>(insts.size());
  if (n < 1) throw FormatError("scene has no instances");
  if (static_cast<int>(labels.size()) != n) throw FormatError("labels/instances length mismatch");

  SceneSample s;
  for (int i = 0; i < n; ++i) {
    const json& ji = insts[i];
    const int id = require(ji, "id", json::value_t::number_integer).get<int>();
    const json& flat = require(ji, "points", json::value_t::array);
    if (flat.empty() || flat.size() % 3 != 0) {
      throw FormatError("instance " + std::to_string(id) + ": point array length must be 3N, N >= 1");
    }
    std::vector<Vec3> pts(flat.size() / 3);
    for (std::size_t k = 0; k < flat.size(); ++k) {
      if (!flat[k].is_number()) throw FormatError("non-numeric point coordinate");
      pts[k / 3][k % 3] = flat[k].get<double>();
    }
    s.instances.push_back(Instance::from_points(id, std::move(pts)));

    const json& jl = labels[i];
    if (require(jl, "id", json::value_t::number_integer).get<int>() != id) {
      throw FormatError("label order does not match instance order");
    }
    s.gt_fine.push_back(int_in(require(jl, "fine", json::value_t::number_integer), 0,
                               t.num_fine(), "fine label"));
    s.gt_coarse.push_back(int_in(require(jl, "coarse", json::value_t::number_integer), 0,
                                 t.num_coarse(), "coarse label"));
  }

  s.gt_predicates = PredicateTensor(n, t.num_predicates());
  for (const json& tr : require(j, "triplets", json::value_t::array)) {
    if (!tr.is_array() || tr.size() != 3) throw FormatError("triplet must be [s, o, p]");
    const int a = int_in(tr[0], 0, n, "triplet subject");
    const int b = int_in(tr[1], 0, n, "triplet object");
    const int p = int_in(tr[2], 0, t.num_predicates(), "triplet predicate");
    if (a == b) throw FormatError("self-relation triplet");
    s.gt_predicates.set(a, b, p);
  }
  s.skeleton = Skeleton(n);
  for (const json& e : require(j, "skeleton", json::value_t::array)) {
    if (!e.is_array() || e.size() != 2) throw FormatError("skeleton edge must be [s, o]");
    s.skeleton.set(int_in(e[0], 0, n, "skeleton subject"), int_in(e[1], 0, n, "skeleton object"));
  }
  validate_sample(s, t);
  return s;
}

void save_scene(const SceneSample& s, const Taxonomy& t, const std::filesystem::path& path) {
  write_json_file(scene_to_json(s, t), path);
}

SceneSample load_scene(const std::filesystem::path& path, const Taxonomy& t) {
  return scene_from_json(read_json_file(path), t);
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(origin + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what(),
                      e.byte);
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path.string());
}

void write_json_file(const json& j, const std::filesystem::path& path, int indent) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(indent) << '\n';
  if (!out) throw ConfigError("write failed: " + path.string());
}

std::string scene_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "scene_%05d.json", index);
  return buf;
}

void save_dataset(const Dataset& d, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create directory " + dir.string() + ": " + ec.message());
  save_taxonomy(d.taxonomy, dir / kTaxonomyFile);
  for (std::size_t k = 0; k < d.scenes.size(); ++k) {
    save_scene(d.scenes[k], d.taxonomy, dir / scene_file_name(static_cast<int>(k)));
  }
}

Dataset load_dataset(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("not a data directory: " + dir.string());
  Dataset d;
  d.taxonomy = load_taxonomy(dir / kTaxonomyFile);
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.rfind("scene_", 0) == 0 && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) d.scenes.push_back(load_scene(f, d.taxonomy));
  return d;
}

}  // namespace insg
