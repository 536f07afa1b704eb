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

#include "insg/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "insg/errors.hpp"

namespace insg::geometry {

Vec3 Aabb::center() const {
  return {(min[0] + max[0]) / 2.0, (min[1] + max[1]) / 2.0, (min[2] + max[2]) / 2.0};
}

Vec3 Aabb::extent() const {
  return {max[0] - min[0], max[1] - min[1], max[2] - min[2]};
}

double Aabb::volume() const {
  const Vec3 e = extent();
  return e[0] * e[1] * e[2];
}

bool Aabb::contains(const Vec3& p) const {
  for (int d = 0; d < 3; ++d) {
    if (p[d] < min[d] || p[d] > max[d]) return false;
  }
  return true;
}

bool Aabb::contains(const Aabb& other) const {
  for (int d = 0; d < 3; ++d) {
    if (other.min[d] < min[d] || other.max[d] > max[d]) return false;
  }
  return true;
}

Aabb Aabb::from_points(std::span<const Vec3> points) {
  if (points.empty()) throw ContractError("Aabb::from_points: empty point set");
  Aabb box{points[0], points[0]};
  for (const Vec3& p : points.subspan(1)) {
    for (int d = 0; d < 3; ++d) {
      box.min[d] = std::min(box.min[d], p[d]);
      box.max[d] = std::max(box.max[d], p[d]);
    }
  }
  return box;
}

void validate(const Aabb& box) {
  for (int d = 0; d < 3; ++d) {
    if (std::isnan(box.min[d]) || std::isnan(box.max[d])) {
      throw ContractError("Aabb: NaN coordinate");
    }
    if (box.min[d] > box.max[d]) throw ContractError("Aabb: min > max");
  }
}

std::string RelativePosition::label() const {
  if (intersectant()) {
    return intersect_kind == IntersectKind::kInclusive ? "intersectant-inclusive"
                                                        : "intersectant-overlap";
  }
  std::string s;
  if (disjoint_axes.contains(Axis::kX)) s += 'X';
  if (disjoint_axes.contains(Axis::kY)) s += 'Y';
  if (disjoint_axes.contains(Axis::kZ)) s += 'Z';
  return s + "-disjoint";
}

RelativePosition classify_relative_position(const Aabb& bi, const Aabb& bj) {
  validate(bi);
  validate(bj);
  const Vec3 ci = bi.center(), cj = bj.center();
  const Vec3 ei = bi.extent(), ej = bj.extent();
  RelativePosition rp;
  for (int d = 0; d < 3; ++d) {
    if (std::abs(ci[d] - cj[d]) >= (ei[d] + ej[d]) / 2.0) {
      rp.disjoint_axes.insert(static_cast<Axis>(d));
    }
  }
  if (rp.disjoint_axes.empty()) {
    rp.intersect_kind = (bi.contains(bj) || bj.contains(bi)) ? IntersectKind::kInclusive
                                                            : IntersectKind::kOverlap;
  }
  return rp;
}

Aabb union_box(const Aabb& bi, const Aabb& bj) {
  Aabb u;
  for (int d = 0; d < 3; ++d) {
    u.min[d] = std::min(bi.min[d], bj.min[d]);
    u.max[d] = std::max(bi.max[d], bj.max[d]);
  }
  return u;
}

namespace {

Aabb raw_intersection(const Aabb& bi, const Aabb& bj) {
  Aabb b;
  for (int d = 0; d < 3; ++d) {
    b.min[d] = std::max(bi.min[d], bj.min[d]);
    b.max[d] = std::min(bi.max[d], bj.max[d]);
  }
  return b;
}

}  // namespace

Aabb intersection_box(const Aabb& bi, const Aabb& bj) {
  if (!classify_relative_position(bi, bj).intersectant()) {
    throw ContractError("intersection_box: boxes are disjoint");
  }
  return raw_intersection(bi, bj);
}

Aabb interaction_space(const Aabb& bi, const Aabb& bj) {
  const RelativePosition rp = classify_relative_position(bi, bj);
  const Aabb u = union_box(bi, bj);
  if (rp.intersectant()) {
    const Aabb inter = raw_intersection(bi, bj);
    Aabb b;
    for (int d = 0; d < 3; ++d) {
      b.min[d] = (inter.min[d] + u.min[d]) / 2.0;
      b.max[d] = (inter.max[d] + u.max[d]) / 2.0;
    }
    return b;
  }
  Aabb b = u;
  const Vec3 ci = bi.center(), cj = bj.center();
  for (int d = 0; d < 3; ++d) {
    if (rp.disjoint_axes.contains(static_cast<Axis>(d))) {
      b.min[d] = std::min(ci[d], cj[d]);
      b.max[d] = std::max(ci[d], cj[d]);
    }
  }
  return b;
}

PositionVector position_vector(const Aabb& bi, const Aabb& bj) {
  validate(bi);
  validate(bj);
  const Aabb u = union_box(bi, bj);
  const Vec3 ue = u.extent();
  auto norm = [&](double v, int d) { return ue[d] > 0.0 ? (v - u.min[d]) / ue[d] : 0.0; };
  PositionVector out{};
  const Vec3* corners[4] = {&bi.min, &bi.max, &bj.min, &bj.max};
  for (int c = 0; c < 4; ++c) {
    for (int d = 0; d < 3; ++d) {
      out[c * 3 + d] = std::clamp(norm((*corners[c])[d], d), 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace insg::geometry
