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

#include "insg/metrics.hpp"

#include <cstdio>
#include <map>
#include <sstream>

#include "insg/errors.hpp"

namespace insg::metrics {

namespace {

void check_k(int k) {
  if (k < 1) throw ContractError("recall@k: k must be >= 1");
}

std::span<const double> row_span(const Matrix& m, Eigen::Index r) {
  return {m.data() + r * m.cols(), static_cast<std::size_t>(m.cols())};
}

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

int rank_of(std::span<const double> scores, int index) {
  const double s = scores[static_cast<std::size_t>(index)];
  int rank = 0;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    if (scores[c] > s || (scores[c] == s && static_cast<int>(c) < index)) ++rank;
  }
  return rank;
}

int argmax(std::span<const double> scores) {
  int best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

std::vector<RankedInstance> object_ranks(const Matrix& fine_probs, std::span<const int> gt_fine) {
  if (static_cast<Eigen::Index>(gt_fine.size()) != fine_probs.rows()) {
    throw ContractError("object_ranks: one label per row required");
  }
  std::vector<RankedInstance> out;
  for (Eigen::Index i = 0; i < fine_probs.rows(); ++i) {
    const int c = gt_fine[static_cast<std::size_t>(i)];
    out.push_back({c, rank_of(row_span(fine_probs, i), c)});
  }
  return out;
}

std::vector<RankedInstance> predicate_ranks(const Matrix& predicate_probs,
                                            std::span<const PairIndex> pairs,
                                            const PredicateTensor& gt) {
  if (static_cast<Eigen::Index>(pairs.size()) != predicate_probs.rows() ||
      predicate_probs.cols() != gt.num_predicates()) {
    throw ContractError("predicate_ranks: shape mismatch");
  }
  std::vector<RankedInstance> out;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto row = row_span(predicate_probs, static_cast<Eigen::Index>(k));
    for (int c = 0; c < gt.num_predicates(); ++c) {
      if (gt.get(pairs[k].subject, pairs[k].object, c)) out.push_back({c, rank_of(row, c)});
    }
  }
  return out;
}

std::vector<RankedInstance> relationship_ranks(const Prediction& p, const SceneSample& sample) {
  const int n = sample.size();
  const Eigen::Index m = p.predicate_probs.cols();
  if (p.fine_probs.rows() != n || p.predicate_probs.rows() != static_cast<Eigen::Index>(p.pairs.size())) {
    throw ContractError("relationship_ranks: prediction does not match the scene");
  }
  std::vector<int> top(n);
  std::vector<double> top_score(n);
  for (int i = 0; i < n; ++i) {
    top[i] = argmax(row_span(p.fine_probs, i));
    top_score[i] = p.fine_probs(i, top[i]);
  }
  // Candidate index = pair_row * m + predicate.
  std::vector<double> scores(p.pairs.size() * static_cast<std::size_t>(m));
  for (std::size_t k = 0; k < p.pairs.size(); ++k) {
    const auto [i, j] = p.pairs[k];
    for (Eigen::Index c = 0; c < m; ++c) {
      scores[k * m + c] = top_score[i] * p.predicate_probs(static_cast<Eigen::Index>(k), c) * top_score[j];
    }
  }
  std::vector<RankedInstance> out;
  for (std::size_t k = 0; k < p.pairs.size(); ++k) {
    const auto [i, j] = p.pairs[k];
    for (Eigen::Index c = 0; c < m; ++c) {
      if (!sample.gt_predicates.get(i, j, static_cast<int>(c))) continue;
      RankedInstance r{static_cast<int>(c), rank_of(scores, static_cast<int>(k * m + c))};
      r.eligible = top[i] == sample.gt_fine[i] && top[j] == sample.gt_fine[j];
      out.push_back(r);
    }
  }
  return out;
}

std::optional<double> recall_at_k(std::span<const RankedInstance> instances, int k) {
  check_k(k);
  if (instances.empty()) return std::nullopt;
  int hits = 0;
  for (const auto& r : instances) hits += r.hit(k) ? 1 : 0;
  return 100.0 * hits / static_cast<double>(instances.size());
}

double object_recall_at_k(const Matrix& fine_probs, std::span<const int> gt_fine, int k) {
  check_k(k);
  if (fine_probs.rows() == 0) throw ContractError("object_recall_at_k: no instances");
  return *recall_at_k(object_ranks(fine_probs, gt_fine), k);
}

std::optional<double> predicate_recall_at_k(const Matrix& predicate_probs,
                                            std::span<const PairIndex> pairs,
                                            const PredicateTensor& gt, int k) {
  check_k(k);
  return recall_at_k(predicate_ranks(predicate_probs, pairs, gt), k);
}

std::optional<double> relationship_recall_at_k(const Prediction& prediction,
                                               const SceneSample& sample, int k) {
  check_k(k);
  return recall_at_k(relationship_ranks(prediction, sample), k);
}

std::vector<std::optional<double>> per_class_recall(std::span<const RankedInstance> instances,
                                                    int num_classes, int k) {
  check_k(k);
  std::vector<long> hits(num_classes, 0), total(num_classes, 0);
  for (const auto& r : instances) {
    if (r.cls < 0 || r.cls >= num_classes) throw ContractError("per_class_recall: class out of range");
    ++total[r.cls];
    hits[r.cls] += r.hit(k) ? 1 : 0;
  }
  std::vector<std::optional<double>> out(num_classes);
  for (int c = 0; c < num_classes; ++c) {
    if (total[c] > 0) out[c] = 100.0 * hits[c] / static_cast<double>(total[c]);
  }
  return out;
}

std::optional<double> mean_recall_at_k(std::span<const RankedInstance> instances, int k) {
  check_k(k);
  std::map<int, std::pair<long, long>> by_class;  // hits, total
  for (const auto& r : instances) {
    auto& [h, t] = by_class[r.cls];
    ++t;
    h += r.hit(k) ? 1 : 0;
  }
  std::vector<double> recalls;
  for (const auto& [c, ht] : by_class) recalls.push_back(100.0 * ht.first / static_cast<double>(ht.second));
  return mean_of(recalls);
}

const char* to_string(TailGroup g) {
  switch (g) {
    case TailGroup::kHead: return "head";
    case TailGroup::kBody: return "body";
    case TailGroup::kTail: return "tail";
  }
  return "?";
}

std::vector<TailGroup> long_tail_groups(std::span<const long> counts,
                                        const LongTailThresholds& t) {
  if (!(t.body <= t.head)) throw ConfigError("long-tail thresholds must satisfy body <= head");
  std::vector<TailGroup> out;
  for (long c : counts) {
    const double v = static_cast<double>(c);
    out.push_back(v > t.head ? TailGroup::kHead : v >= t.body ? TailGroup::kBody : TailGroup::kTail);
  }
  return out;
}

std::vector<long> predicate_counts(std::span<const SceneSample> samples, int num_predicates) {
  std::vector<long> counts(num_predicates, 0);
  for (const auto& s : samples) {
    const int n = s.size();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int c = 0; c < num_predicates; ++c) counts[c] += s.gt_predicates.get(i, j, c) ? 1 : 0;
      }
    }
  }
  return counts;
}

MetricReport evaluate(std::span<const Prediction> predictions, std::span<const SceneSample> samples,
                      const Taxonomy& taxonomy, std::span<const long> train_counts,
                      const LongTailThresholds& thresholds) {
  if (predictions.size() != samples.size()) throw ContractError("evaluate: size mismatch");
  const int m = taxonomy.num_predicates();
  if (static_cast<int>(train_counts.size()) != m) throw ContractError("evaluate: train_counts size");

  std::vector<std::vector<RankedInstance>> obj, pred, rel;
  std::vector<RankedInstance> all_obj, all_pred, all_rel;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    obj.push_back(object_ranks(predictions[s].fine_probs, samples[s].gt_fine));
    pred.push_back(predicate_ranks(predictions[s].predicate_probs, predictions[s].pairs,
                                   samples[s].gt_predicates));
    rel.push_back(relationship_ranks(predictions[s], samples[s]));
    all_obj.insert(all_obj.end(), obj.back().begin(), obj.back().end());
    all_pred.insert(all_pred.end(), pred.back().begin(), pred.back().end());
    all_rel.insert(all_rel.end(), rel.back().begin(), rel.back().end());
  }

  auto rows = [](const std::vector<std::vector<RankedInstance>>& per_scene,
                 const std::vector<RankedInstance>& pooled, std::span<const int> ks) {
    std::vector<RecallRow> out;
    for (int k : ks) {
      std::vector<double> scene_recalls;
      for (const auto& inst : per_scene) {
        if (auto r = recall_at_k(inst, k)) scene_recalls.push_back(*r);
      }
      out.push_back({k, mean_of(scene_recalls), mean_recall_at_k(pooled, k)});
    }
    return out;
  };

  MetricReport report;
  report.num_scenes = static_cast<int>(samples.size());
  report.object = rows(obj, all_obj, kObjectKs);
  report.predicate = rows(pred, all_pred, kPredicateKs);
  report.relationship = rows(rel, all_rel, kRelationshipKs);

  const std::vector<TailGroup> groups = long_tail_groups(train_counts, thresholds);
  for (int c = 0; c < m; ++c) {
    PredicateRow row;
    row.name = taxonomy.predicate_classes[c];
    row.train_count = train_counts[c];
    row.group = groups[c];
    for (int k : kPredicateKs) row.predicate_recall.push_back(per_class_recall(all_pred, m, k)[c]);
    for (int k : kRelationshipKs) row.relationship_recall.push_back(per_class_recall(all_rel, m, k)[c]);
    report.per_predicate.push_back(std::move(row));
  }
  for (TailGroup g : {TailGroup::kHead, TailGroup::kBody, TailGroup::kTail}) {
    GroupRow gr{g, 0, {}};
    for (std::size_t ki = 0; ki < std::size(kRelationshipKs); ++ki) {
      std::vector<double> vals;
      for (const auto& row : report.per_predicate) {
        if (row.group == g && row.relationship_recall[ki]) vals.push_back(*row.relationship_recall[ki]);
      }
      gr.mean_recall.push_back(mean_of(vals));
    }
    for (const auto& row : report.per_predicate) gr.num_classes += row.group == g ? 1 : 0;
    report.long_tail.push_back(std::move(gr));
  }
  return report;
}

namespace {

nlohmann::json opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json rows_json(const std::vector<RecallRow>& rows) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& r : rows) {
    j["R@" + std::to_string(r.k)] = opt(r.recall);
    j["mR@" + std::to_string(r.k)] = opt(r.mean_recall);
  }
  return j;
}

std::string csv_cell(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

}  // namespace

nlohmann::json to_json(const MetricReport& r) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& row : r.per_predicate) {
    nlohmann::json jr{{"predicate", row.name},
                      {"train_count", row.train_count},
                      {"group", to_string(row.group)}};
    for (std::size_t k = 0; k < std::size(kPredicateKs); ++k) {
      jr["predicate_R@" + std::to_string(kPredicateKs[k])] = opt(row.predicate_recall[k]);
    }
    for (std::size_t k = 0; k < std::size(kRelationshipKs); ++k) {
      jr["relationship_R@" + std::to_string(kRelationshipKs[k])] = opt(row.relationship_recall[k]);
    }
    per.push_back(std::move(jr));
  }
  nlohmann::json groups = nlohmann::json::object();
  for (const auto& g : r.long_tail) {
    nlohmann::json jg{{"num_classes", g.num_classes}};
    for (std::size_t k = 0; k < std::size(kRelationshipKs); ++k) {
      jg["mR@" + std::to_string(kRelationshipKs[k])] = opt(g.mean_recall[k]);
    }
    groups[to_string(g.group)] = std::move(jg);
  }
  return {{"version", 1},
          {"num_scenes", r.num_scenes},
          {"object", rows_json(r.object)},
          {"predicate", rows_json(r.predicate)},
          {"relationship", rows_json(r.relationship)},
          {"per_predicate", std::move(per)},
          {"long_tail", std::move(groups)}};
}

std::string per_predicate_csv(const MetricReport& r) {
  std::ostringstream out;
  out << "predicate,train_count,group";
  for (int k : kPredicateKs) out << ",predicate_R@" << k;
  for (int k : kRelationshipKs) out << ",relationship_R@" << k;
  out << '\n';
  for (const auto& row : r.per_predicate) {
    out << '"' << row.name << '"' << ',' << row.train_count << ',' << to_string(row.group);
    for (const auto& v : row.predicate_recall) out << ',' << csv_cell(v);
    for (const auto& v : row.relationship_recall) out << ',' << csv_cell(v);
    out << '\n';
  }
  return out.str();
}

}  // namespace insg::metrics
