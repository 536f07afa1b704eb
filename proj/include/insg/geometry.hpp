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

// Box-pair geometry for relation regions: relative-position classification,
// union/intersection boxes, the interaction space between two objects and the
// 12-d union-normalized position vector.

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace insg::geometry {

using Vec3 = std::array<double, 3>;

enum class Axis : std::uint8_t { kX = 0, kY = 1, kZ = 2 };

// Axis-aligned box in scene coordinates (meters).
struct Aabb {
  Vec3 min{0.0, 0.0, 0.0};
  Vec3 max{0.0, 0.0, 0.0};

  Vec3 center() const;
  // (l, w, h) = max - min.
  Vec3 extent() const;
  double volume() const;
  // Closed-interval membership.
  bool contains(const Vec3& p) const;
  bool contains(const Aabb& other) const;

  friend bool operator==(const Aabb&, const Aabb&) = default;

  // Tight box of a non-empty point set.
  static Aabb from_points(std::span<const Vec3> points);
};

// Throws ContractError on NaN coordinates or min > max.
void validate(const Aabb& box);

class AxisSet {
 public:
  constexpr AxisSet() = default;
  constexpr explicit AxisSet(std::uint8_t bits) : bits_(bits & 0x7u) {}

  constexpr bool contains(Axis a) const { return bits_ & bit(a); }
  constexpr void insert(Axis a) { bits_ |= bit(a); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }

  friend constexpr bool operator==(AxisSet, AxisSet) = default;

 private:
  static constexpr std::uint8_t bit(Axis a) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(a));
  }
  std::uint8_t bits_ = 0;
};

enum class IntersectKind : std::uint8_t { kInclusive, kOverlap, kNotApplicable };

struct RelativePosition {
  AxisSet disjoint_axes;
  IntersectKind intersect_kind = IntersectKind::kNotApplicable;

  bool intersectant() const { return disjoint_axes.empty(); }
  // "intersectant-inclusive", "X-disjoint", "XZ-disjoint", ...
  std::string label() const;

  friend bool operator==(const RelativePosition&, const RelativePosition&) = default;
};

// Layout: [p_min^i, p_max^i, p_min^j, p_max^j], each component in [0, 1].
using PositionVector = std::array<double, 12>;

RelativePosition classify_relative_position(const Aabb& bi, const Aabb& bj);

Aabb union_box(const Aabb& bi, const Aabb& bj);

// Requires an intersectant pair; throws ContractError otherwise.
Aabb intersection_box(const Aabb& bi, const Aabb& bj);

// Union box, shrunk to the span between the two centers on every disjoint
// axis. Intersectant pairs get the midpoint between intersection and union.
Aabb interaction_space(const Aabb& bi, const Aabb& bj);

// Corners of bi (subject) and bj (object) relative to their union box.
// Axes where the union has zero extent map to 0.
PositionVector position_vector(const Aabb& bi, const Aabb& bj);

}  // namespace insg::geometry
