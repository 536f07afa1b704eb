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

// Feature initialization of the fully connected scene graph: a shared-MLP
// point encoder with max pooling for entities, a second one for the points of
// each pair's relation region, and an MLP over the 12-d position vector.

#include <cstdint>
#include <span>
#include <vector>

#include "insg/geometry.hpp"
#include "insg/layers.hpp"
#include "insg/scene.hpp"

namespace insg {

struct EncoderDims {
  int entity_dim = 256;
  int relation_point_dim = 256;
  int position_dim = 64;
  int relation_dim() const { return relation_point_dim + position_dim; }
  friend bool operator==(const EncoderDims&, const EncoderDims&) = default;
};

// Which box a pair's relation points are gathered from.
enum class RelationRegion { kInteractionSpace, kUnion };

struct EncoderOptions {
  RelationRegion region = RelationRegion::kInteractionSpace;
  bool use_position = true;
  int points_per_region = 256;
};

// Per-point MLP 3 -> 64 -> 128 -> out (ReLU after every layer), then a
// column-wise max over each block of points.
class PointEncoder {
 public:
  PointEncoder() = default;
  PointEncoder(nn::ParamStore& store, const std::string& name, int out_dim, Rng& rng);

  // `points` stacks `sets` blocks of equal height.
  nn::Tensor operator()(const nn::Matrix& points, Eigen::Index sets) const;
  // Features of every point before pooling.
  nn::Tensor per_point(const nn::Matrix& points) const;
  int out_dim() const { return mlp_.out_features(); }

 private:
  nn::Mlp mlp_;
};

struct Encoders {
  PointEncoder entity;
  PointEncoder relation;
  nn::Mlp position;  // 12 -> 64 -> 64
  EncoderDims dims;

  static Encoders create(nn::ParamStore& store, const EncoderDims& dims, Rng& rng);
};

// Exactly `count` points drawn from the distinct points of the input: a
// seeded subset without replacement when there are enough, otherwise every
// point once plus seeded duplicates. The result does not depend on input
// order or on repeated input points.
std::vector<Vec3> resample(std::span<const Vec3> points, int count, std::uint64_t seed);

// Region whose points describe the (i, j) relation.
Aabb relation_region(const Aabb& bi, const Aabb& bj, RelationRegion region);

// Points inside `box` (closed), in input order.
std::vector<Vec3> points_in(std::span<const Vec3> points, const Aabb& box);

// 1 x entity_dim. Points are resampled and centered on their box center.
nn::Tensor encode_entity(std::span<const Vec3> points, const Encoders& enc, int points_per_region,
                         std::uint64_t seed);

// 1 x position_dim. Throws ContractError on components outside [0, 1] while
// finite checks are enabled.
nn::Tensor encode_position(const geometry::PositionVector& v, const Encoders& enc);

// 1 x relation_dim: point features of the region (zeros when it holds no
// points) followed by the position encoding (zeros when disabled).
nn::Tensor encode_relation(std::span<const Vec3> scene_points, const Aabb& bi, const Aabb& bj,
                           const Encoders& enc, const EncoderOptions& options, std::uint64_t seed);

struct FeatureGraph {
  int num_entities = 0;
  std::vector<PairIndex> pairs;  // ordered_pairs(num_entities)
  nn::Tensor entity;             // n x entity_dim
  nn::Tensor relation;           // n(n-1) x relation_dim, row k <-> pairs[k]
};

// Resampling seeds, keyed by instance id so that reordering instances does
// not change any feature. Both orders of a pair share one seed.
std::uint64_t entity_seed(std::uint64_t seed, int id);
std::uint64_t pair_seed(std::uint64_t seed, int id_i, int id_j);

FeatureGraph build_feature_graph(const SceneSample& sample, const Encoders& enc,
                                 const EncoderOptions& options, std::uint64_t seed);

}  // namespace insg
