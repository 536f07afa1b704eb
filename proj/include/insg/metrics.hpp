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

// Top-k recall for object, predicate and relationship (triplet) prediction,
// class-balanced mean recall, and head/body/tail grouping of predicates.
//
// Ranking convention everywhere: descending score, ties broken by ascending
// class (or candidate) index. Percentages are in [0, 100].

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "insg/reasoning.hpp"
#include "insg/scene.hpp"

namespace insg::metrics {

using nn::Matrix;

// Position of `index` in `scores` under the ranking convention (0 = first).
int rank_of(std::span<const double> scores, int index);
int argmax(std::span<const double> scores);

// One ground-truth instance: its class and the rank it achieved.
struct RankedInstance {
  int cls;
  int rank;
  bool eligible = true;  // false when a precondition other than rank failed
  bool hit(int k) const { return eligible && rank < k; }
};

std::vector<RankedInstance> object_ranks(const Matrix& fine_probs, std::span<const int> gt_fine);
std::vector<RankedInstance> predicate_ranks(const Matrix& predicate_probs,
                                            std::span<const PairIndex> pairs,
                                            const PredicateTensor& gt);
// Triplet score = fine_probs[i][top1] * predicate_probs[(i,j)][c] *
// fine_probs[j][top1]; a ground-truth triplet is eligible only when both
// top-1 entity classes are correct.
std::vector<RankedInstance> relationship_ranks(const Prediction& prediction,
                                               const SceneSample& sample);

// Fraction of instances hit, in percent; nullopt when there are none.
std::optional<double> recall_at_k(std::span<const RankedInstance> instances, int k);

// Per-scene metrics. Throw ContractError when k < 1.
double object_recall_at_k(const Matrix& fine_probs, std::span<const int> gt_fine, int k);
std::optional<double> predicate_recall_at_k(const Matrix& predicate_probs,
                                            std::span<const PairIndex> pairs,
                                            const PredicateTensor& gt, int k);
std::optional<double> relationship_recall_at_k(const Prediction& prediction,
                                               const SceneSample& sample, int k);

// Recall of each class with at least one instance, then their unweighted
// mean. nullopt when no class has instances.
std::optional<double> mean_recall_at_k(std::span<const RankedInstance> instances, int k);
// Recall per class id in [0, num_classes); nullopt for classes without
// instances.
std::vector<std::optional<double>> per_class_recall(std::span<const RankedInstance> instances,
                                                    int num_classes, int k);

enum class TailGroup { kHead, kBody, kTail };
const char* to_string(TailGroup g);

// head: count > head, body: body <= count <= head, tail: count < body.
struct LongTailThresholds {
  double head = 1e4;
  double body = 1e3;
};
std::vector<TailGroup> long_tail_groups(std::span<const long> counts,
                                        const LongTailThresholds& thresholds = {});

// Ground-truth instance count of every predicate class.
std::vector<long> predicate_counts(std::span<const SceneSample> samples, int num_predicates);

inline constexpr int kObjectKs[] = {1, 5, 10};
inline constexpr int kPredicateKs[] = {1, 3, 5};
inline constexpr int kRelationshipKs[] = {50, 100};

struct RecallRow {
  int k;
  std::optional<double> recall;       // macro over scenes
  std::optional<double> mean_recall;  // class-balanced
};

struct PredicateRow {
  std::string name;
  long train_count = 0;
  TailGroup group = TailGroup::kTail;
  std::vector<std::optional<double>> predicate_recall;     // per kPredicateKs
  std::vector<std::optional<double>> relationship_recall;  // per kRelationshipKs
};

struct GroupRow {
  TailGroup group;
  int num_classes = 0;
  std::vector<std::optional<double>> mean_recall;  // per kRelationshipKs
};

struct MetricReport {
  int num_scenes = 0;
  std::vector<RecallRow> object;
  std::vector<RecallRow> predicate;
  std::vector<RecallRow> relationship;
  std::vector<PredicateRow> per_predicate;
  std::vector<GroupRow> long_tail;
};

// `train_counts` drives the long-tail grouping; pass the counts of the
// training split (or of the evaluated data when no split is known).
MetricReport evaluate(std::span<const Prediction> predictions, std::span<const SceneSample> samples,
                      const Taxonomy& taxonomy, std::span<const long> train_counts,
                      const LongTailThresholds& thresholds = {});

nlohmann::json to_json(const MetricReport& report);
// Header: predicate,train_count,group,P@R1,... one row per predicate class.
std::string per_predicate_csv(const MetricReport& report);

}  // namespace insg::metrics
