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

// Deterministic synthetic indoor scenes: primitive point-cloud objects on a
// floor or on top of other objects, labelled by fixed geometric rules.

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "insg/scene.hpp"

namespace insg::synth {

// Thresholds of the geometric predicate rules. All distances in meters.
struct PredicateRules {
  // Spatial predicates (left/right/front/behind/higher/lower) only hold for
  // pairs whose horizontal box gap is at most this.
  double near_distance = 1.0;
  // left/right etc. require |center delta| > ratio * mean extent on the axis.
  double direction_ratio = 0.5;
  // standing-on / attached-to contact tolerance.
  double contact_tolerance = 0.05;
  // same-as: identical fine class and all extents within this tolerance.
  double same_extent_tolerance = 0.03;
  // A table with >= 2 seats within this horizontal gap is a dining table.
  double seat_distance = 0.5;
  // At most one predicate per ordered pair: standing-on, then attached-to,
  // then same-as, then the direction whose |center delta| / mean extent is
  // largest (x before y before z on ties).
  bool single_label = true;
};

struct GeneratorConfig {
  int min_entities = 3;
  int max_entities = 5;
  double room_x = 5.0;
  double room_y = 5.0;
  double noise_sigma = 0.004;
  int min_points = 200;
  int max_points = 500;
  // Relative per-axis size jitter of non-cloned objects.
  double size_jitter = 0.1;
  double clone_probability = 0.2;
  double support_probability = 0.35;
  double flush_probability = 0.25;
  double seat_near_table_probability = 0.6;
  PredicateRules rules;

  // Throws ConfigError.
  void validate() const;
};

nlohmann::json to_json(const GeneratorConfig& c);
// Missing keys keep their defaults; unknown keys are rejected.
GeneratorConfig generator_config_from_json(const nlohmann::json& j);

// 4 coarse classes, 12 fine classes, 9 predicates.
const Taxonomy& synthetic_taxonomy();

// Predicate ids of the synthetic taxonomy.
enum SyntheticPredicate : int {
  kLeft = 0,
  kRight,
  kFront,
  kBehind,
  kHigherThan,
  kLowerThan,
  kStandingOn,
  kAttachedTo,
  kSameAs,
};

// Fine labels from template kinds: a table template becomes a dining table
// when at least two seats are close to it.
std::vector<int> apply_context_labels(const std::vector<Aabb>& boxes,
                                      const std::vector<int>& template_fine,
                                      const PredicateRules& rules);

// The label oracle. Predicates depend only on boxes and fine labels.
PredicateTensor apply_predicate_rules(const std::vector<Aabb>& boxes,
                                      const std::vector<int>& fine,
                                      const PredicateRules& rules);

struct GeneratedScene {
  SceneSample sample;
  // Index of the instance this one was cloned from, or -1.
  std::vector<int> clone_of;
  // Index of the instance this one was placed on, or -1 for the floor.
  std::vector<int> placed_on;
};

GeneratedScene generate_scene_detailed(std::uint64_t seed, const GeneratorConfig& config);
SceneSample generate_scene(std::uint64_t seed, const GeneratorConfig& config);

// Scene `index` of a dataset generated from `seed`.
SceneSample generate_dataset_scene(std::uint64_t seed, int index, const GeneratorConfig& config);
std::vector<SceneSample> generate_dataset(std::uint64_t seed, int count,
                                          const GeneratorConfig& config);

}  // namespace insg::synth
