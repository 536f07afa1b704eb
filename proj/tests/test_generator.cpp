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

#include <gtest/gtest.h>

#include "insg/errors.hpp"
#include "insg/generator.hpp"
#include "insg/scene_io.hpp"

using namespace insg;
using namespace insg::synth;

namespace {

std::vector<Aabb> boxes_of(const SceneSample& s) {
  std::vector<Aabb> out;
  for (const auto& inst : s.instances) out.push_back(inst.aabb);
  return out;
}

}  // namespace

TEST(SyntheticTaxonomy, Shape) {
  const Taxonomy& t = synthetic_taxonomy();
  EXPECT_NO_THROW(t.validate());
  EXPECT_EQ(t.num_coarse(), 4);
  EXPECT_EQ(t.num_fine(), 12);
  EXPECT_EQ(t.num_predicates(), 9);
  EXPECT_EQ(t.predicate_classes[kStandingOn], "standing on");
  EXPECT_EQ(t.predicate_classes[kSameAs], "same as");
  EXPECT_EQ(t.fine_classes[t.fine_index("dining table")], "dining table");
}

TEST(Generator, SameSeedIsBitIdentical) {
  const GeneratorConfig c;
  EXPECT_EQ(generate_scene(9, c), generate_scene(9, c));
  EXPECT_EQ(scene_to_json(generate_scene(9, c), synthetic_taxonomy()).dump(),
            scene_to_json(generate_scene(9, c), synthetic_taxonomy()).dump());
  EXPECT_NE(generate_scene(9, c), generate_scene(10, c));
}

TEST(Generator, ScenesSatisfyInvariantsAndConfig) {
  GeneratorConfig c;
  for (int seed = 0; seed < 60; ++seed) {
    const SceneSample s = generate_scene(seed, c);
    EXPECT_NO_THROW(validate_sample(s, synthetic_taxonomy()));
    EXPECT_GE(s.size(), c.min_entities);
    EXPECT_LE(s.size(), c.max_entities);
    for (const auto& inst : s.instances) {
      EXPECT_GE(static_cast<int>(inst.points.size()), c.min_points);
      EXPECT_LE(static_cast<int>(inst.points.size()), c.max_points);
    }
  }
}

TEST(Generator, LabelsAreReproducibleFromGeometry) {
  const GeneratorConfig c;
  for (int seed = 0; seed < 60; ++seed) {
    const SceneSample s = generate_scene(seed, c);
    EXPECT_EQ(apply_predicate_rules(boxes_of(s), s.gt_fine, c.rules), s.gt_predicates) << seed;
  }
}

TEST(Generator, PlacedOnTopGivesStandingOn) {
  int checked = 0;
  for (int seed = 0; seed < 200; ++seed) {
    const GeneratedScene g = generate_scene_detailed(seed, {});
    for (int i = 0; i < g.sample.size(); ++i) {
      if (g.placed_on[i] < 0) continue;
      EXPECT_TRUE(g.sample.gt_predicates.get(i, g.placed_on[i], kStandingOn)) << seed;
      ++checked;
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(Generator, ClonesAreSameAsBothWays) {
  int checked = 0;
  for (int seed = 0; seed < 200; ++seed) {
    const GeneratedScene g = generate_scene_detailed(seed, {});
    const auto& p = g.sample.gt_predicates;
    for (int i = 0; i < g.sample.size(); ++i) {
      const int j = g.clone_of[i];
      if (j < 0) continue;
      // Support and contact take precedence over same-as.
      if (p.get(i, j, kStandingOn) || p.get(j, i, kStandingOn) || p.get(i, j, kAttachedTo) ||
          p.get(j, i, kAttachedTo)) {
        continue;
      }
      EXPECT_TRUE(p.get(i, j, kSameAs)) << seed;
      EXPECT_TRUE(p.get(j, i, kSameAs)) << seed;
      ++checked;
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(Generator, SingleLabelPerPairByDefault) {
  for (int seed = 0; seed < 100; ++seed) {
    const SceneSample s = generate_scene(seed, {});
    for (int i = 0; i < s.size(); ++i) {
      for (int j = 0; j < s.size(); ++j) {
        int k = 0;
        for (int c = 0; c < 9; ++c) k += s.gt_predicates.get(i, j, c);
        EXPECT_LE(k, 1);
      }
    }
  }
}

TEST(PredicateRules, DirectionsAndPrecedence) {
  PredicateRules multi;
  multi.single_label = false;
  // b is right of a (+x) and slightly behind (+y): with multiple labels both
  // hold, with one label the dominant x direction wins.
  const std::vector<Aabb> boxes{{{0, 0, 0}, {1, 1, 1}}, {{1.5, 0.8, 0}, {2.5, 1.8, 1}}};
  const std::vector<int> fine{0, 2};
  const PredicateTensor m = apply_predicate_rules(boxes, fine, multi);
  EXPECT_TRUE(m.get(0, 1, kLeft));
  EXPECT_TRUE(m.get(0, 1, kFront));
  EXPECT_TRUE(m.get(1, 0, kRight));
  EXPECT_TRUE(m.get(1, 0, kBehind));
  const PredicateTensor one = apply_predicate_rules(boxes, fine, PredicateRules{});
  EXPECT_TRUE(one.get(0, 1, kLeft));
  EXPECT_FALSE(one.get(0, 1, kFront));
  EXPECT_TRUE(one.get(1, 0, kRight));
  EXPECT_EQ(one.count(), 2);
}

TEST(PredicateRules, StandingOnBeatsHigherThan) {
  const std::vector<Aabb> boxes{{{0, 0, 0}, {2, 2, 1}}, {{0.5, 0.5, 1.01}, {1, 1, 1.3}}};
  const PredicateTensor t = apply_predicate_rules(boxes, {2, 10}, PredicateRules{});
  EXPECT_TRUE(t.get(1, 0, kStandingOn));
  EXPECT_FALSE(t.get(1, 0, kHigherThan));
  EXPECT_TRUE(t.get(0, 1, kLowerThan));
}

TEST(PredicateRules, FarPairsHaveNoSpatialPredicate) {
  const std::vector<Aabb> boxes{{{0, 0, 0}, {1, 1, 1}}, {{2.5, 0, 0}, {3.5, 1, 1}}};
  const PredicateTensor t = apply_predicate_rules(boxes, {0, 2}, PredicateRules{});
  EXPECT_EQ(t.count(), 0);
}

TEST(ContextLabels, TableWithTwoSeatsBecomesDiningTable) {
  const Taxonomy& t = synthetic_taxonomy();
  const int chair = t.fine_index("chair"), table = t.fine_index("table");
  const std::vector<Aabb> boxes{{{0, 0, 0}, {2, 1, 0.75}},
                                {{-0.6, 0, 0}, {-0.2, 0.4, 0.9}},
                                {{2.2, 0, 0}, {2.6, 0.4, 0.9}}};
  EXPECT_EQ(apply_context_labels(boxes, {table, chair, chair}, {})[0], t.fine_index("dining table"));
  EXPECT_EQ(apply_context_labels({boxes[0], boxes[1]}, {table, chair}, {})[0], table);
}

TEST(GeneratorConfig, JsonRoundTripAndValidation) {
  GeneratorConfig c;
  c.max_entities = 7;
  c.rules.single_label = false;
  const GeneratorConfig back = generator_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_THROW(generator_config_from_json({{"bogus", 1}}), ConfigError);
  EXPECT_THROW(generator_config_from_json({{"min_entities", 0}}), ConfigError);
  EXPECT_THROW(generator_config_from_json({{"min_entities", 6}, {"max_entities", 5}}), ConfigError);
  EXPECT_THROW(generate_dataset(0, 0, {}), ConfigError);
}

TEST(Generator, DatasetScenesDependOnlyOnSeedAndIndex) {
  const auto a = generate_dataset(5, 6, {});
  const auto b = generate_dataset(5, 3, {});
  for (int k = 0; k < 3; ++k) EXPECT_EQ(a[k], b[k]);
  EXPECT_EQ(a[4], generate_dataset_scene(5, 4, {}));
}
