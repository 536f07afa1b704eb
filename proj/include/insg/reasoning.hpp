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

// Graph contextual reasoning: skeleton gating of every ordered pair,
// rule-weighted bipartite message passing between entity and predicate
// nodes with GRU updates, and the coarse / fine / predicate heads.

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "insg/encoders.hpp"
#include "insg/layers.hpp"
#include "insg/scene.hpp"

namespace insg {

struct ModelConfig {
  int num_coarse = 0;
  int num_fine = 0;
  int num_predicates = 0;
  EncoderDims dims;
  int points_per_region = 256;
  int iterations = 3;  // u
  bool use_ins = true;
  bool use_pos = true;
  bool use_gsl = true;
  bool use_hol = true;
  double alpha_init = 2.2;
  double beta_init = 0.025;
  std::uint64_t init_seed = 0;

  void validate() const;
  EncoderOptions encoder_options() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

nlohmann::json to_json(const ModelConfig& c);
ModelConfig model_config_from_json(const nlohmann::json& j);

// Every learnable weight, registered once in `params` under a stable name.
class SceneGraphModel {
 public:
  explicit SceneGraphModel(const ModelConfig& config);
  SceneGraphModel(const SceneGraphModel&) = delete;
  SceneGraphModel& operator=(const SceneGraphModel&) = delete;

  const ModelConfig& config() const { return config_; }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }

  // Keeps the gate well formed: beta in [0, 0.5], alpha in [0.1, 10].
  void project_gate_parameters();

  Encoders encoders;
  nn::Mlp gsl;  // relation_dim -> 128 -> 64 -> 2
  nn::Tensor alpha;
  nn::Tensor beta;
  nn::Mlp g_subject;    // entity_dim -> relation_dim -> relation_dim
  nn::Mlp g_object;     // entity_dim -> relation_dim -> relation_dim
  nn::Mlp g_predicate;  // relation_dim -> entity_dim -> entity_dim
  nn::GruCell gru_entity;
  nn::GruCell gru_predicate;
  nn::Mlp coarse_head;     // entity_dim -> 256 -> 128 -> num_coarse
  nn::Mlp fine_head;       // entity_dim -> 256 -> 128 -> num_fine
  nn::Mlp predicate_head;  // relation_dim -> 256 -> 128 -> num_predicates

 private:
  ModelConfig config_;
  nn::ParamStore params_;
};

struct GateOutput {
  nn::Tensor pre_gate;  // R x 1, positive-class probability
  nn::Tensor rules;     // R x 1, gated weight in [0, 1]
};

GateOutput gsl_gate(const nn::Tensor& relation_features, const SceneGraphModel& model);

// R x relation_dim: mean of the subject and object MLPs applied to the
// rule-scaled entity states of every pair.
nn::Tensor message_to_predicate(const nn::Tensor& rules, const nn::Tensor& entity_states,
                                const std::vector<PairIndex>& pairs, const SceneGraphModel& model);

// n x entity_dim: for every entity, the mean of g_predicate over the
// rule-scaled states of all pairs it takes part in (as subject or object).
// Entities in no pair receive a zero message.
nn::Tensor message_to_entity(const nn::Tensor& rules, const nn::Tensor& predicate_states,
                             const std::vector<PairIndex>& pairs, int num_entities,
                             const SceneGraphModel& model);

struct HiddenStates {
  std::vector<nn::Tensor> entity;     // t = 0..u, n x entity_dim
  std::vector<nn::Tensor> predicate;  // t = 0..u, R x relation_dim
};

// Synchronous updates: all messages at step t are computed from the states of
// step t before any node is updated. `rules` stay fixed over all iterations.
HiddenStates run_message_passing(const FeatureGraph& graph, const nn::Tensor& rules,
                                 const SceneGraphModel& model, int iterations);

struct ForwardOptions {
  int iterations = 3;
  bool gating_enabled = true;
  bool hol_enabled = true;
  std::uint64_t sample_seed = 0;
  // Replaces the gated rules (R x 1) when set.
  const nn::Matrix* rule_override = nullptr;

  static ForwardOptions from(const ModelConfig& c, std::uint64_t sample_seed = 0);
};

struct ForwardOutput {
  FeatureGraph graph;
  GateOutput gate;  // pre_gate is set even when gating is disabled
  nn::Tensor rules;
  HiddenStates states;
  nn::Tensor coarse_logits;  // n x num_coarse, undefined when HOL is off
  nn::Tensor fine_logits;
  nn::Tensor predicate_logits;
};

ForwardOutput forward(const SceneSample& sample, const SceneGraphModel& model,
                      const ForwardOptions& options);

struct Prediction {
  nn::Matrix coarse_probs;     // n x C_coarse (0 columns when HOL is off)
  nn::Matrix fine_probs;       // n x C_fine
  nn::Matrix predicate_probs;  // R x m, independent per class
  nn::Matrix rules;            // R x 1
  nn::Matrix pre_gate_probs;   // R x 1
  std::vector<PairIndex> pairs;
};

Prediction to_prediction(const ForwardOutput& out);
Prediction predict(const SceneSample& sample, const SceneGraphModel& model,
                   const ForwardOptions& options);

}  // namespace insg
