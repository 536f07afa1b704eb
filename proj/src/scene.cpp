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

#include "insg/scene.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

#include "insg/errors.hpp"
#include "insg/rng.hpp"

namespace insg {

Instance Instance::from_points(int id, std::vector<Vec3> points) {
  Instance inst;
  inst.id = id;
  inst.aabb = Aabb::from_points(points);
  inst.points = std::move(points);
  return inst;
}

int Taxonomy::fine_index(const std::string& name) const {
  auto it = std::find(fine_classes.begin(), fine_classes.end(), name);
  if (it == fine_classes.end()) throw ConfigError("unknown fine class: " + name);
  return static_cast<int>(it - fine_classes.begin());
}

int Taxonomy::predicate_index(const std::string& name) const {
  auto it = std::find(predicate_classes.begin(), predicate_classes.end(), name);
  if (it == predicate_classes.end()) throw ConfigError("unknown predicate: " + name);
  return static_cast<int>(it - predicate_classes.begin());
}

namespace {

void check_unique(const std::vector<std::string>& names, const char* what) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) {
      throw ConfigError(std::string("taxonomy: duplicate ") + what + " '" + n + "'");
    }
  }
}

}  // namespace

void Taxonomy::validate() const {
  check_unique(coarse_classes, "coarse class");
  check_unique(fine_classes, "fine class");
  check_unique(predicate_classes, "predicate");
  if (predicate_classes.empty()) throw ConfigError("taxonomy: no predicate classes");
  if (fine_classes.empty()) throw ConfigError("taxonomy: no fine classes");
  if (fine_to_coarse.size() != fine_classes.size()) {
    throw ConfigError("taxonomy: fine_to_coarse must map every fine class");
  }
  for (int c : fine_to_coarse) {
    if (c < 0 || c >= num_coarse()) throw ConfigError("taxonomy: coarse id out of range");
  }
}

std::uint64_t Taxonomy::hash() const {
  nlohmann::json j;
  j["coarse"] = coarse_classes;
  j["fine"] = fine_classes;
  j["fine_to_coarse"] = fine_to_coarse;
  j["predicates"] = predicate_classes;
  return fnv1a64(j.dump());
}

bool PredicateTensor::any(int i, int j) const {
  for (int p = 0; p < m_; ++p) {
    if (get(i, j, p)) return true;
  }
  return false;
}

int PredicateTensor::count() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

int Skeleton::count() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

Skeleton derive_skeleton(const PredicateTensor& predicates) {
  const int n = predicates.num_entities();
  Skeleton s(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && predicates.any(i, j)) s.set(i, j);
    }
  }
  return s;
}

std::vector<Vec3> SceneSample::all_points() const {
  std::vector<Vec3> pts;
  for (const auto& inst : instances) pts.insert(pts.end(), inst.points.begin(), inst.points.end());
  return pts;
}

SceneSample make_sample(std::vector<Instance> instances, std::vector<int> gt_fine,
                        PredicateTensor predicates, const Taxonomy& taxonomy) {
  SceneSample s;
  s.instances = std::move(instances);
  s.gt_fine = std::move(gt_fine);
  s.gt_coarse.reserve(s.gt_fine.size());
  for (int f : s.gt_fine) {
    if (f < 0 || f >= taxonomy.num_fine()) throw FormatError("fine class id out of range");
    s.gt_coarse.push_back(taxonomy.fine_to_coarse[f]);
  }
  s.skeleton = derive_skeleton(predicates);
  s.gt_predicates = std::move(predicates);
  validate_sample(s, taxonomy);
  return s;
}

void validate_sample(const SceneSample& s, const Taxonomy& taxonomy) {
  const int n = s.size();
  if (n < 1) throw FormatError("scene has no instances");
  if (static_cast<int>(s.gt_fine.size()) != n || static_cast<int>(s.gt_coarse.size()) != n) {
    throw FormatError("label count does not match instance count");
  }
  for (int i = 0; i < n; ++i) {
    const Instance& inst = s.instances[i];
    if (inst.points.empty()) throw FormatError("instance with no points");
    if (!(Aabb::from_points(inst.points) == inst.aabb)) {
      throw FormatError("instance box is not the tight box of its points");
    }
    const int f = s.gt_fine[i];
    if (f < 0 || f >= taxonomy.num_fine()) throw FormatError("fine class id out of range");
    if (s.gt_coarse[i] != taxonomy.fine_to_coarse[f]) {
      throw FormatError("coarse label inconsistent with fine_to_coarse");
    }
  }
  if (s.gt_predicates.num_entities() != n ||
      s.gt_predicates.num_predicates() != taxonomy.num_predicates()) {
    throw FormatError("predicate tensor shape mismatch");
  }
  for (int i = 0; i < n; ++i) {
    for (int p = 0; p < taxonomy.num_predicates(); ++p) {
      if (s.gt_predicates.get(i, i, p)) throw FormatError("self-relation in predicate tensor");
    }
  }
  if (!(s.skeleton == derive_skeleton(s.gt_predicates))) {
    throw FormatError("skeleton inconsistent with predicates");
  }
}

std::vector<PairIndex> ordered_pairs(int n) {
  std::vector<PairIndex> pairs;
  if (n > 1) pairs.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) pairs.push_back({i, j});
    }
  }
  return pairs;
}

}  // namespace insg
