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

#include "insg/reasoning.hpp"

#include <algorithm>
#include <cmath>

#include "insg/errors.hpp"

namespace insg {

using nn::Matrix;
using nn::Tensor;

void ModelConfig::validate() const {
  if (num_coarse < 1 || num_fine < 1 || num_predicates < 1) {
    throw ConfigError("model: class counts must be >= 1");
  }
  if (dims.entity_dim < 1 || dims.relation_point_dim < 1 || dims.position_dim < 1) {
    throw ConfigError("model: feature widths must be >= 1");
  }
  if (points_per_region < 1) throw ConfigError("model: points_per_region must be >= 1");
  if (iterations < 0) throw ConfigError("model: iterations must be >= 0");
  if (!(alpha_init > 0)) throw ConfigError("model: alpha_init must be > 0");
}

EncoderOptions ModelConfig::encoder_options() const {
  EncoderOptions o;
  o.region = use_ins ? RelationRegion::kInteractionSpace : RelationRegion::kUnion;
  o.use_position = use_pos;
  o.points_per_region = points_per_region;
  return o;
}

nlohmann::json to_json(const ModelConfig& c) {
  return {{"num_coarse", c.num_coarse},
          {"num_fine", c.num_fine},
          {"num_predicates", c.num_predicates},
          {"entity_dim", c.dims.entity_dim},
          {"relation_point_dim", c.dims.relation_point_dim},
          {"position_dim", c.dims.position_dim},
          {"points_per_region", c.points_per_region},
          {"iterations", c.iterations},
          {"use_ins", c.use_ins},
          {"use_pos", c.use_pos},
          {"use_gsl", c.use_gsl},
          {"use_hol", c.use_hol},
          {"alpha_init", c.alpha_init},
          {"beta_init", c.beta_init},
          {"init_seed", c.init_seed}};
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  try {
    ModelConfig c;
    c.num_coarse = j.at("num_coarse").get<int>();
    c.num_fine = j.at("num_fine").get<int>();
    c.num_predicates = j.at("num_predicates").get<int>();
    c.dims.entity_dim = j.at("entity_dim").get<int>();
    c.dims.relation_point_dim = j.at("relation_point_dim").get<int>();
    c.dims.position_dim = j.at("position_dim").get<int>();
    c.points_per_region = j.at("points_per_region").get<int>();
    c.iterations = j.at("iterations").get<int>();
    c.use_ins = j.at("use_ins").get<bool>();
    c.use_pos = j.at("use_pos").get<bool>();
    c.use_gsl = j.at("use_gsl").get<bool>();
    c.use_hol = j.at("use_hol").get<bool>();
    c.alpha_init = j.at("alpha_init").get<double>();
    c.beta_init = j.at("beta_init").get<double>();
    c.init_seed = j.at("init_seed").get<std::uint64_t>();
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model config: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(e.what());
  }
}

SceneGraphModel::SceneGraphModel(const ModelConfig& config) : config_(config) {
  config_.validate();
  Rng rng(mix_seed(config_.init_seed));
  const int E = config_.dims.entity_dim;
  const int D = config_.dims.relation_dim();
  encoders = Encoders::create(params_, config_.dims, rng);
  gsl = nn::Mlp(params_, "gsl", {D, 128, 64, 2}, rng);
  alpha = params_.add("gate.alpha", Matrix::Constant(1, 1, config_.alpha_init));
  beta = params_.add("gate.beta", Matrix::Constant(1, 1, config_.beta_init));
  g_subject = nn::Mlp(params_, "g_subject", {E, D, D}, rng);
  g_object = nn::Mlp(params_, "g_object", {E, D, D}, rng);
  g_predicate = nn::Mlp(params_, "g_predicate", {D, E, E}, rng);
  gru_entity = nn::GruCell(params_, "gru_entity", E, E, rng);
  gru_predicate = nn::GruCell(params_, "gru_predicate", D, D, rng);
  coarse_head = nn::Mlp(params_, "head_coarse", {E, 256, 128, config_.num_coarse}, rng);
  fine_head = nn::Mlp(params_, "head_fine", {E, 256, 128, config_.num_fine}, rng);
  predicate_head = nn::Mlp(params_, "head_predicate", {D, 256, 128, config_.num_predicates}, rng);
}

void SceneGraphModel::project_gate_parameters() {
  double& a = alpha.mutable_value()(0, 0);
  double& b = beta.mutable_value()(0, 0);
  a = std::clamp(a, 0.1, 10.0);
  b = std::clamp(b, 0.0, 0.5);
}

GateOutput gsl_gate(const Tensor& relation_features, const SceneGraphModel& model) {
  GateOutput g;
  Tensor probs = nn::softmax_rows(model.gsl(relation_features));
  g.pre_gate = nn::slice_cols(probs, 1, 1);
  g.rules = nn::gate(g.pre_gate, model.alpha, model.beta);
  return g;
}

namespace {

std::vector<int> subjects(const std::vector<PairIndex>& pairs) {
  std::vector<int> v;
  v.reserve(pairs.size());
  for (const auto& p : pairs) v.push_back(p.subject);
  return v;
}

std::vector<int> objects(const std::vector<PairIndex>& pairs) {
  std::vector<int> v;
  v.reserve(pairs.size());
  for (const auto& p : pairs) v.push_back(p.object);
  return v;
}

}  // namespace

Tensor message_to_predicate(const Tensor& rules, const Tensor& entity_states,
                            const std::vector<PairIndex>& pairs, const SceneGraphModel& model) {
  const std::vector<int> s = subjects(pairs);
  const std::vector<int> o = objects(pairs);
  Tensor from_subject = model.g_subject(nn::scale_rows(nn::gather_rows(entity_states, s), rules));
  Tensor from_object = model.g_object(nn::scale_rows(nn::gather_rows(entity_states, o), rules));
  return nn::scale(nn::add(from_subject, from_object), 0.5);
}

Tensor message_to_entity(const Tensor& rules, const Tensor& predicate_states,
                         const std::vector<PairIndex>& pairs, int num_entities,
                         const SceneGraphModel& model) {
  const int E = model.config().dims.entity_dim;
  if (pairs.empty()) return Tensor::zeros(num_entities, E);
  Tensor per_pair = model.g_predicate(nn::scale_rows(predicate_states, rules));
  const std::vector<int> s = subjects(pairs);
  const std::vector<int> o = objects(pairs);
  Tensor total = nn::add(nn::scatter_add_rows(per_pair, s, num_entities),
                         nn::scatter_add_rows(per_pair, o, num_entities));
  Matrix inv_count = Matrix::Zero(num_entities, 1);
  for (const auto& p : pairs) {
    inv_count(p.subject, 0) += 1.0;
    inv_count(p.object, 0) += 1.0;
  }
  for (int i = 0; i < num_entities; ++i) {
    inv_count(i, 0) = inv_count(i, 0) > 0 ? 1.0 / inv_count(i, 0) : 0.0;
  }
  return nn::scale_rows(total, Tensor::constant(std::move(inv_count)));
}

HiddenStates run_message_passing(const FeatureGraph& graph, const Tensor& rules,
                                 const SceneGraphModel& model, int iterations) {
  if (iterations < 0) throw ContractError("run_message_passing: iterations must be >= 0");
  HiddenStates h;
  h.entity.push_back(graph.entity);
  h.predicate.push_back(graph.relation);
  const bool has_pairs = !graph.pairs.empty();
  for (int t = 0; t < iterations; ++t) {
    const Tensor& he = h.entity.back();
    const Tensor& hp = h.predicate.back();
    Tensor me = message_to_entity(rules, hp, graph.pairs, graph.num_entities, model);
    Tensor next_p = hp;
    if (has_pairs) {
      Tensor mp = message_to_predicate(rules, he, graph.pairs, model);
      next_p = model.gru_predicate(hp, mp);
    }
    Tensor next_e = model.gru_entity(he, me);
    h.entity.push_back(next_e);
    h.predicate.push_back(next_p);
  }
  return h;
}

ForwardOptions ForwardOptions::from(const ModelConfig& c, std::uint64_t sample_seed) {
  ForwardOptions o;
  o.iterations = c.iterations;
  o.gating_enabled = c.use_gsl;
  o.hol_enabled = c.use_hol;
  o.sample_seed = sample_seed;
  return o;
}

ForwardOutput forward(const SceneSample& sample, const SceneGraphModel& model,
                      const ForwardOptions& options) {
  ForwardOutput out;
  out.graph = build_feature_graph(sample, model.encoders, model.config().encoder_options(),
                                  options.sample_seed);
  const Eigen::Index R = static_cast<Eigen::Index>(out.graph.pairs.size());
  if (R > 0) {
    out.gate = gsl_gate(out.graph.relation, model);
  } else {
    out.gate.pre_gate = Tensor::zeros(0, 1);
    out.gate.rules = Tensor::zeros(0, 1);
  }
  if (options.rule_override) {
    if (options.rule_override->rows() != R || options.rule_override->cols() != 1) {
      throw ContractError("forward: rule override must be R x 1");
    }
    out.rules = Tensor::constant(*options.rule_override);
  } else if (options.gating_enabled) {
    out.rules = out.gate.rules;
  } else {
    out.rules = Tensor::constant(Matrix::Ones(R, 1));
  }
  out.states = run_message_passing(out.graph, out.rules, model, options.iterations);
  if (options.hol_enabled) out.coarse_logits = model.coarse_head(out.graph.entity);
  out.fine_logits = model.fine_head(out.states.entity.back());
  out.predicate_logits = R > 0 ? model.predicate_head(out.states.predicate.back())
                               : Tensor::zeros(0, model.config().num_predicates);
  return out;
}

namespace {

Matrix softmax_values(const Matrix& logits) {
  Matrix p(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double m = logits.row(r).maxCoeff();
    p.row(r) = (logits.row(r).array() - m).exp().matrix();
    p.row(r) /= p.row(r).sum();
  }
  return p;
}

}  // namespace

Prediction to_prediction(const ForwardOutput& out) {
  Prediction p;
  const Eigen::Index n = out.fine_logits.rows();
  p.coarse_probs = out.coarse_logits.defined() ? softmax_values(out.coarse_logits.value())
                                               : Matrix(n, 0);
  p.fine_probs = softmax_values(out.fine_logits.value());
  p.predicate_probs = out.predicate_logits.value().unaryExpr([](double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
  });
  p.rules = out.rules.value();
  p.pre_gate_probs = out.gate.pre_gate.value();
  p.pairs = out.graph.pairs;
  return p;
}

Prediction predict(const SceneSample& sample, const SceneGraphModel& model,
                   const ForwardOptions& options) {
  return to_prediction(forward(sample, model, options));
}

}  // namespace insg
