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

#include "insg/encoders.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "insg/errors.hpp"
#include "insg/rng.hpp"

namespace insg {

using nn::Matrix;
using nn::Tensor;

PointEncoder::PointEncoder(nn::ParamStore& store, const std::string& name, int out_dim, Rng& rng)
    : mlp_(store, name, {3, 64, 128, out_dim}, rng, /*relu_last=*/true) {}

Tensor PointEncoder::per_point(const Matrix& points) const {
  return mlp_(Tensor::constant(points));
}

Tensor PointEncoder::operator()(const Matrix& points, Eigen::Index sets) const {
  return nn::segment_max_rows(per_point(points), sets);
}

Encoders Encoders::create(nn::ParamStore& store, const EncoderDims& dims, Rng& rng) {
  Encoders e;
  e.dims = dims;
  e.entity = PointEncoder(store, "enc_entity", dims.entity_dim, rng);
  e.relation = PointEncoder(store, "enc_relation", dims.relation_point_dim, rng);
  e.position = nn::Mlp(store, "enc_position", {12, dims.position_dim, dims.position_dim}, rng);
  return e;
}

std::vector<Vec3> resample(std::span<const Vec3> input, int count, std::uint64_t seed) {
  if (input.empty()) throw ContractError("resample: empty point set");
  if (count < 1) throw ContractError("resample: count must be >= 1");
  // Canonical order makes the sample independent of input order and of
  // repeated points.
  std::vector<Vec3> points(input.begin(), input.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  Rng rng(mix_seed(seed));
  const std::size_t n = points.size();
  const std::size_t want = static_cast<std::size_t>(count);
  std::vector<Vec3> out;
  out.reserve(want);
  if (n >= want) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t k = 0; k < want; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, n - 1);
      std::swap(idx[k], idx[pick(rng)]);
      out.push_back(points[idx[k]]);
    }
    return out;
  }
  out.assign(points.begin(), points.end());
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  while (out.size() < want) out.push_back(points[pick(rng)]);
  return out;
}

Aabb relation_region(const Aabb& bi, const Aabb& bj, RelationRegion region) {
  return region == RelationRegion::kInteractionSpace ? geometry::interaction_space(bi, bj)
                                                     : geometry::union_box(bi, bj);
}

std::vector<Vec3> points_in(std::span<const Vec3> points, const Aabb& box) {
  std::vector<Vec3> out;
  for (const Vec3& p : points) {
    if (box.contains(p)) out.push_back(p);
  }
  return out;
}

namespace {

// Appends `points` centered on `center` as rows [row, row + size).
void write_block(Matrix& m, Eigen::Index row, std::span<const Vec3> points, const Vec3& center) {
  for (std::size_t k = 0; k < points.size(); ++k) {
    for (int d = 0; d < 3; ++d) m(row + static_cast<Eigen::Index>(k), d) = points[k][d] - center[d];
  }
}

Matrix position_rows(const std::vector<geometry::PositionVector>& vs) {
  Matrix m(static_cast<Eigen::Index>(vs.size()), 12);
  for (std::size_t r = 0; r < vs.size(); ++r) {
    for (int c = 0; c < 12; ++c) {
      const double v = vs[r][c];
      if (nn::finite_checks() && !(v >= 0.0 && v <= 1.0)) {
        throw ContractError("encode_position: component outside [0, 1]");
      }
      m(static_cast<Eigen::Index>(r), c) = v;
    }
  }
  return m;
}

}  // namespace

std::uint64_t entity_seed(std::uint64_t seed, int id) {
  return derive_seed(seed, {0, static_cast<std::uint64_t>(id)});
}

std::uint64_t pair_seed(std::uint64_t seed, int i, int j) {
  return derive_seed(seed, {1, static_cast<std::uint64_t>(std::min(i, j)),
                            static_cast<std::uint64_t>(std::max(i, j))});
}

Tensor encode_entity(std::span<const Vec3> points, const Encoders& enc, int points_per_region,
                     std::uint64_t seed) {
  if (points.empty()) throw ContractError("encode_entity: empty point set");
  const std::vector<Vec3> sampled = resample(points, points_per_region, seed);
  Matrix m(points_per_region, 3);
  write_block(m, 0, sampled, Aabb::from_points(points).center());
  return enc.entity(m, 1);
}

Tensor encode_position(const geometry::PositionVector& v, const Encoders& enc) {
  return enc.position(Tensor::constant(position_rows({v})));
}

Tensor encode_relation(std::span<const Vec3> scene_points, const Aabb& bi, const Aabb& bj,
                       const Encoders& enc, const EncoderOptions& options, std::uint64_t seed) {
  const Aabb region = relation_region(bi, bj, options.region);
  const std::vector<Vec3> inside = points_in(scene_points, region);
  Tensor point_part = Tensor::zeros(1, enc.dims.relation_point_dim);
  if (!inside.empty()) {
    const std::vector<Vec3> sampled = resample(inside, options.points_per_region, seed);
    Matrix m(options.points_per_region, 3);
    write_block(m, 0, sampled, region.center());
    point_part = enc.relation(m, 1);
  }
  Tensor pos_part = options.use_position
                        ? encode_position(geometry::position_vector(bi, bj), enc)
                        : Tensor::zeros(1, enc.dims.position_dim);
  const Tensor parts[] = {point_part, pos_part};
  return nn::concat_cols(parts);
}

FeatureGraph build_feature_graph(const SceneSample& sample, const Encoders& enc,
                                 const EncoderOptions& options, std::uint64_t seed) {
  const int n = sample.size();
  if (n < 1) throw ContractError("build_feature_graph: empty scene");
  const int P = options.points_per_region;
  if (P < 1) throw ContractError("build_feature_graph: points_per_region must be >= 1");

  FeatureGraph fg;
  fg.num_entities = n;
  fg.pairs = ordered_pairs(n);

  Matrix entity_points(static_cast<Eigen::Index>(n) * P, 3);
  for (int i = 0; i < n; ++i) {
    const Instance& inst = sample.instances[i];
    write_block(entity_points, static_cast<Eigen::Index>(i) * P,
                resample(inst.points, P, entity_seed(seed, inst.id)), inst.aabb.center());
  }
  fg.entity = enc.entity(entity_points, n);

  const int R = static_cast<int>(fg.pairs.size());
  if (R == 0) {
    fg.relation = Tensor::zeros(0, enc.dims.relation_dim());
    return fg;
  }

  // Both orders of a pair share one region and one point sample, so each
  // unordered pair is encoded once and gathered into both rows.
  const std::vector<Vec3> scene_points = sample.all_points();
  std::map<std::pair<int, int>, int> unordered;
  std::vector<std::vector<Vec3>> blocks;
  std::vector<Vec3> centers;
  std::vector<int> pair_to_block(R, -1);
  for (int k = 0; k < R; ++k) {
    const auto [i, j] = fg.pairs[k];
    const auto key = std::make_pair(std::min(i, j), std::max(i, j));
    auto it = unordered.find(key);
    if (it == unordered.end()) {
      const Aabb region =
          relation_region(sample.instances[i].aabb, sample.instances[j].aabb, options.region);
      std::vector<Vec3> inside = points_in(scene_points, region);
      int block = -1;
      if (!inside.empty()) {
        block = static_cast<int>(blocks.size());
        blocks.push_back(resample(
            inside, P, pair_seed(seed, sample.instances[i].id, sample.instances[j].id)));
        centers.push_back(region.center());
      }
      it = unordered.emplace(key, block).first;
    }
    pair_to_block[k] = it->second;
  }

  Tensor point_part;
  if (blocks.empty()) {
    point_part = Tensor::zeros(R, enc.dims.relation_point_dim);
  } else {
    Matrix rel_points(static_cast<Eigen::Index>(blocks.size()) * P, 3);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      write_block(rel_points, static_cast<Eigen::Index>(b) * P, blocks[b], centers[b]);
    }
    Tensor encoded = enc.relation(rel_points, static_cast<Eigen::Index>(blocks.size()));
    // Empty regions gather from an appended zero row.
    const Tensor with_zero_parts[] = {encoded, Tensor::zeros(1, enc.dims.relation_point_dim)};
    Tensor with_zero = nn::concat_rows(with_zero_parts);
    const int zero_row = static_cast<int>(blocks.size());
    std::vector<int> rows(R);
    for (int k = 0; k < R; ++k) rows[k] = pair_to_block[k] >= 0 ? pair_to_block[k] : zero_row;
    point_part = nn::gather_rows(with_zero, rows);
  }

  Tensor pos_part;
  if (options.use_position) {
    std::vector<geometry::PositionVector> vs;
    vs.reserve(R);
    for (const auto& [i, j] : fg.pairs) {
      vs.push_back(geometry::position_vector(sample.instances[i].aabb, sample.instances[j].aabb));
    }
    pos_part = enc.position(Tensor::constant(position_rows(vs)));
  } else {
    pos_part = Tensor::zeros(R, enc.dims.position_dim);
  }
  const Tensor parts[] = {point_part, pos_part};
  fg.relation = nn::concat_cols(parts);
  return fg;
}

}  // namespace insg
