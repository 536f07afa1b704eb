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

#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "insg/errors.hpp"
#include "insg/generator.hpp"
#include "insg/scene.hpp"
#include "insg/scene_io.hpp"

using namespace insg;
namespace fs = std::filesystem;

namespace {

Taxonomy small_taxonomy() {
  Taxonomy t;
  t.coarse_classes = {"furniture", "item"};
  t.fine_classes = {"chair", "table", "cup"};
  t.fine_to_coarse = {0, 0, 1};
  t.predicate_classes = {"left", "on"};
  return t;
}

Instance square(int id, double x) {
  return Instance::from_points(id, {{x, 0, 0}, {x + 1, 0, 0}, {x, 1, 0.5}, {x + 1, 1, 1}});
}

SceneSample small_scene() {
  PredicateTensor p(3, 2);
  p.set(0, 1, 0);
  p.set(0, 1, 1);
  p.set(2, 0, 1);
  return make_sample({square(4, 0), square(7, 2), square(9, 4)}, {0, 1, 2}, p, small_taxonomy());
}

fs::path temp_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("insg_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Skeleton, AllZeroTensor) {
  const Skeleton s = derive_skeleton(PredicateTensor(4, 9));
  EXPECT_EQ(s.count(), 0);
}

TEST(Skeleton, DirectedOrReduction) {
  PredicateTensor p(3, 9);
  p.set(0, 1, 2);
  p.set(0, 1, 5);
  const Skeleton s = derive_skeleton(p);
  EXPECT_TRUE(s.get(0, 1));
  EXPECT_FALSE(s.get(1, 0));
  EXPECT_EQ(s.count(), 1);
}

TEST(Skeleton, MatchesAnyOracleOnRandomTensors) {
  std::mt19937_64 rng(17);
  std::bernoulli_distribution bit(0.1);
  for (int trial = 0; trial < 50; ++trial) {
    PredicateTensor p(4, 9);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int c = 0; c < 9; ++c)
          if (bit(rng)) p.set(i, j, c);
    const Skeleton s = derive_skeleton(p);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        bool any = false;
        for (int c = 0; c < 9; ++c) any = any || p.get(i, j, c);
        EXPECT_EQ(s.get(i, j), i != j && any);
      }
    }
  }
}

TEST(Taxonomy, ValidationAndLookup) {
  Taxonomy t = small_taxonomy();
  EXPECT_NO_THROW(t.validate());
  EXPECT_EQ(t.fine_index("table"), 1);
  EXPECT_EQ(t.predicate_index("on"), 1);
  Taxonomy dup = t;
  dup.fine_classes[2] = "chair";
  EXPECT_THROW(dup.validate(), ConfigError);
  Taxonomy partial = t;
  partial.fine_to_coarse.pop_back();
  EXPECT_THROW(partial.validate(), ConfigError);
  Taxonomy empty = t;
  empty.predicate_classes.clear();
  EXPECT_THROW(empty.validate(), ConfigError);
}

TEST(Taxonomy, HashDependsOnContent) {
  Taxonomy a = small_taxonomy(), b = small_taxonomy();
  EXPECT_EQ(a.hash(), b.hash());
  b.predicate_classes[1] = "under";
  EXPECT_NE(a.hash(), b.hash());
}

TEST(SceneSample, MakeSampleFillsDerivedFields) {
  const SceneSample s = small_scene();
  EXPECT_EQ(s.gt_coarse, (std::vector<int>{0, 0, 1}));
  EXPECT_TRUE(s.skeleton.get(0, 1));
  EXPECT_TRUE(s.skeleton.get(2, 0));
  EXPECT_EQ(s.skeleton.count(), 2);
  EXPECT_NO_THROW(validate_sample(s, small_taxonomy()));
  EXPECT_EQ(s.all_points().size(), 12u);
}

TEST(SceneSample, ValidationRejectsBrokenInvariants) {
  const Taxonomy t = small_taxonomy();
  SceneSample s = small_scene();
  s.gt_coarse[2] = 0;
  EXPECT_THROW(validate_sample(s, t), FormatError);

  s = small_scene();
  s.skeleton.set(1, 2);
  EXPECT_THROW(validate_sample(s, t), FormatError);

  s = small_scene();
  s.instances[0].aabb.max[0] += 0.1;
  EXPECT_THROW(validate_sample(s, t), FormatError);

  s = small_scene();
  s.gt_predicates.set(1, 1, 0);
  EXPECT_THROW(validate_sample(s, t), FormatError);
}

TEST(OrderedPairs, SubjectMajorAndRowIndex) {
  const auto pairs = ordered_pairs(4);
  ASSERT_EQ(pairs.size(), 12u);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    EXPECT_NE(pairs[k].subject, pairs[k].object);
    EXPECT_EQ(pair_row(4, pairs[k].subject, pairs[k].object), static_cast<int>(k));
  }
  EXPECT_EQ(pairs[0].subject, 0);
  EXPECT_EQ(pairs[0].object, 1);
  EXPECT_EQ(pairs[3].subject, 1);
  EXPECT_EQ(pairs[3].object, 0);
  EXPECT_TRUE(ordered_pairs(1).empty());
}

TEST(SceneIo, RoundTrip) {
  const fs::path d = temp_dir("scene_rt");
  const Taxonomy t = small_taxonomy();
  const SceneSample s = small_scene();
  save_scene(s, t, d / "s.json");
  EXPECT_EQ(load_scene(d / "s.json", t), s);
  save_taxonomy(t, d / "t.json");
  EXPECT_EQ(load_taxonomy(d / "t.json"), t);
}

TEST(SceneIo, GeneratedSceneRoundTripIsExact) {
  const fs::path d = temp_dir("scene_gen_rt");
  const Taxonomy& t = synth::synthetic_taxonomy();
  const SceneSample s = synth::generate_scene(42, {});
  save_scene(s, t, d / "s.json");
  EXPECT_EQ(load_scene(d / "s.json", t), s);
  save_scene(load_scene(d / "s.json", t), t, d / "s2.json");
  EXPECT_EQ(read_file(d / "s.json"), read_file(d / "s2.json"));
}

TEST(SceneIo, RejectsInconsistentSkeleton) {
  const Taxonomy t = small_taxonomy();
  nlohmann::json j = scene_to_json(small_scene(), t);
  j["skeleton"].push_back({1, 2});
  EXPECT_THROW(scene_from_json(j, t), FormatError);
}

TEST(SceneIo, RejectsTaxonomyMismatch) {
  Taxonomy other = small_taxonomy();
  other.predicate_classes.push_back("near");
  const nlohmann::json j = scene_to_json(small_scene(), small_taxonomy());
  EXPECT_THROW(scene_from_json(j, other), FormatError);
}

TEST(SceneIo, RejectsWrongVersionAndSchema) {
  const Taxonomy t = small_taxonomy();
  nlohmann::json j = scene_to_json(small_scene(), t);
  j["version"] = 2;
  EXPECT_THROW(scene_from_json(j, t), FormatError);
  j = scene_to_json(small_scene(), t);
  j["triplets"].push_back({0, 0, 1});
  EXPECT_THROW(scene_from_json(j, t), FormatError);
  j = scene_to_json(small_scene(), t);
  j["instances"][0]["points"].push_back(1.0);
  EXPECT_THROW(scene_from_json(j, t), FormatError);
}

TEST(SceneIo, TruncatedFileReportsByteOffset) {
  const fs::path d = temp_dir("scene_trunc");
  const Taxonomy t = small_taxonomy();
  save_scene(small_scene(), t, d / "s.json");
  const std::string text = read_file(d / "s.json");
  {
    std::ofstream out(d / "cut.json", std::ios::binary);
    out << text.substr(0, text.size() / 2);
  }
  try {
    load_scene(d / "cut.json", t);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    ASSERT_TRUE(e.has_offset());
    EXPECT_GT(e.byte_offset(), 0u);
    EXPECT_LE(e.byte_offset(), text.size() / 2 + 1);
  }
}

TEST(SceneIo, DatasetDirectory) {
  const fs::path d = temp_dir("dataset");
  Dataset ds;
  ds.taxonomy = synth::synthetic_taxonomy();
  ds.scenes = synth::generate_dataset(3, 4, {});
  save_dataset(ds, d);
  const Dataset back = load_dataset(d);
  EXPECT_EQ(back.taxonomy, ds.taxonomy);
  EXPECT_EQ(back.scenes, ds.scenes);
  EXPECT_TRUE(fs::exists(d / scene_file_name(3)));
  EXPECT_THROW(load_dataset(d / "missing"), ConfigError);
}
