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

#include <cstdint>
#include <string>
#include <vector>

#include "insg/geometry.hpp"

namespace insg {

using geometry::Aabb;
using geometry::Vec3;

struct Instance {
  int id = 0;
  std::vector<Vec3> points;
  // Tight box of `points`.
  Aabb aabb;

  static Instance from_points(int id, std::vector<Vec3> points);

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Two-level object hierarchy plus predicate vocabulary.
struct Taxonomy {
  std::vector<std::string> coarse_classes;
  std::vector<std::string> fine_classes;
  std::vector<int> fine_to_coarse;  // indexed by fine id
  std::vector<std::string> predicate_classes;

  int num_coarse() const { return static_cast<int>(coarse_classes.size()); }
  int num_fine() const { return static_cast<int>(fine_classes.size()); }
  int num_predicates() const { return static_cast<int>(predicate_classes.size()); }

  int fine_index(const std::string& name) const;
  int predicate_index(const std::string& name) const;

  // Throws ConfigError when a list has duplicates, the map is not total, or
  // there are no predicates.
  void validate() const;
  // FNV-1a of the canonical JSON encoding.
  std::uint64_t hash() const;

  friend bool operator==(const Taxonomy&, const Taxonomy&) = default;
};

// Dense n x n x m binary tensor; entries on the diagonal are unused.
class PredicateTensor {
 public:
  PredicateTensor() = default;
  PredicateTensor(int n, int m) : n_(n), m_(m), bits_(static_cast<std::size_t>(n) * n * m, 0) {}

  int num_entities() const { return n_; }
  int num_predicates() const { return m_; }

  bool get(int i, int j, int p) const { return bits_[index(i, j, p)] != 0; }
  void set(int i, int j, int p, bool v = true) { bits_[index(i, j, p)] = v ? 1 : 0; }
  bool any(int i, int j) const;
  int count() const;

  friend bool operator==(const PredicateTensor&, const PredicateTensor&) = default;

 private:
  std::size_t index(int i, int j, int p) const {
    return (static_cast<std::size_t>(i) * n_ + j) * m_ + p;
  }
  int n_ = 0;
  int m_ = 0;
  std::vector<std::uint8_t> bits_;
};

// n x n binary edge-existence matrix, row = subject.
class Skeleton {
 public:
  Skeleton() = default;
  explicit Skeleton(int n) : n_(n), bits_(static_cast<std::size_t>(n) * n, 0) {}

  int size() const { return n_; }
  bool get(int i, int j) const { return bits_[static_cast<std::size_t>(i) * n_ + j] != 0; }
  void set(int i, int j, bool v = true) { bits_[static_cast<std::size_t>(i) * n_ + j] = v ? 1 : 0; }
  int count() const;

  friend bool operator==(const Skeleton&, const Skeleton&) = default;

 private:
  int n_ = 0;
  std::vector<std::uint8_t> bits_;
};

Skeleton derive_skeleton(const PredicateTensor& predicates);

struct SceneSample {
  std::vector<Instance> instances;
  std::vector<int> gt_fine;
  std::vector<int> gt_coarse;
  PredicateTensor gt_predicates;
  Skeleton skeleton;

  int size() const { return static_cast<int>(instances.size()); }
  // Every point of every instance, instance order.
  std::vector<Vec3> all_points() const;

  friend bool operator==(const SceneSample&, const SceneSample&) = default;
};

// Builds a sample, filling gt_coarse and the skeleton from the taxonomy and
// predicate tensor.
SceneSample make_sample(std::vector<Instance> instances, std::vector<int> gt_fine,
                        PredicateTensor predicates, const Taxonomy& taxonomy);

// Throws FormatError when any SceneSample invariant is violated.
void validate_sample(const SceneSample& sample, const Taxonomy& taxonomy);

// Ordered pairs (i, j), i != j, enumerated subject-major. Row k of every
// per-pair matrix refers to pairs()[k].
struct PairIndex {
  int subject;
  int object;
};
std::vector<PairIndex> ordered_pairs(int n);
inline int pair_row(int n, int i, int j) { return i * (n - 1) + (j < i ? j : j - 1); }

}  // namespace insg
