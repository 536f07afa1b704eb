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

#include "insg/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "insg/errors.hpp"
#include "insg/metrics.hpp"
#include "insg/rng.hpp"
#include "insg/scene_io.hpp"
#include "json_fields.hpp"

namespace insg {

using nn::Matrix;
using nn::Tensor;

void TrainConfig::validate() const {
  if (epochs < 0) throw ConfigError("train: epochs must be >= 0");
  if (!(lambda_coarse >= 0) || !(lambda_fine >= 0)) throw ConfigError("train: lambdas must be >= 0");
  if (iterations < 0) throw ConfigError("train: iterations must be >= 0");
  if (points_per_region < 1) throw ConfigError("train: points_per_region must be >= 1");
  if (!(clip_norm >= 0)) throw ConfigError("train: clip_norm must be >= 0");
  if (checkpoint_every < 0) throw ConfigError("train: checkpoint_every must be >= 0");
  if (!(max_loss >= 0)) throw ConfigError("train: max_loss must be >= 0");
  adam().validate();
}

nn::AdamConfig TrainConfig::adam() const {
  nn::AdamConfig a;
  a.lr = lr;
  a.beta1 = beta1;
  a.beta2 = beta2;
  a.eps = adam_eps;
  return a;
}

ModelConfig TrainConfig::model_config(const Taxonomy& taxonomy) const {
  ModelConfig m;
  m.num_coarse = taxonomy.num_coarse();
  m.num_fine = taxonomy.num_fine();
  m.num_predicates = taxonomy.num_predicates();
  m.points_per_region = points_per_region;
  m.iterations = iterations;
  m.use_ins = use_ins;
  m.use_pos = use_pos;
  m.use_gsl = use_gsl;
  m.use_hol = use_hol;
  m.init_seed = derive_seed(seed, {fnv1a64("init")});
  return m;
}

nlohmann::json to_json(const TrainConfig& c) {
  return {{"version", 1},
          {"epochs", c.epochs},
          {"seed", c.seed},
          {"lr", c.lr},
          {"lambda_coarse", c.lambda_coarse},
          {"lambda_fine", c.lambda_fine},
          {"iterations", c.iterations},
          {"use_ins", c.use_ins},
          {"use_pos", c.use_pos},
          {"use_gsl", c.use_gsl},
          {"use_hol", c.use_hol},
          {"points_per_region", c.points_per_region},
          {"clip_norm", c.clip_norm},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"adam_eps", c.adam_eps},
          {"checkpoint_every", c.checkpoint_every},
          {"max_loss", c.max_loss}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  using detail::read_field;
  if (!j.is_object()) throw ConfigError("train config must be a JSON object");
  TrainConfig c;
  detail::reject_unknown(j, to_json(c));
  read_field(j, "epochs", c.epochs);
  read_field(j, "seed", c.seed);
  read_field(j, "lr", c.lr);
  read_field(j, "lambda_coarse", c.lambda_coarse);
  read_field(j, "lambda_fine", c.lambda_fine);
  read_field(j, "iterations", c.iterations);
  read_field(j, "use_ins", c.use_ins);
  read_field(j, "use_pos", c.use_pos);
  read_field(j, "use_gsl", c.use_gsl);
  read_field(j, "use_hol", c.use_hol);
  read_field(j, "points_per_region", c.points_per_region);
  read_field(j, "clip_norm", c.clip_norm);
  read_field(j, "beta1", c.beta1);
  read_field(j, "beta2", c.beta2);
  read_field(j, "adam_eps", c.adam_eps);
  read_field(j, "checkpoint_every", c.checkpoint_every);
  read_field(j, "max_loss", c.max_loss);
  c.validate();
  return c;
}

double weighted_total(double gsl, double predicate, double coarse, double fine,
                      double lambda_coarse, double lambda_fine) {
  return gsl + predicate + lambda_coarse * coarse + lambda_fine * fine;
}

Tensor loss_gsl(const Tensor& pre_gate, const Skeleton& skeleton,
                const std::vector<PairIndex>& pairs) {
  if (pre_gate.rows() != static_cast<Eigen::Index>(pairs.size()) || pre_gate.cols() != 1) {
    throw ContractError("loss_gsl: one probability per pair required");
  }
  Matrix target(pre_gate.rows(), 1);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    target(static_cast<Eigen::Index>(k), 0) = skeleton.get(pairs[k].subject, pairs[k].object) ? 1.0 : 0.0;
  }
  return nn::bce_probs(pre_gate, target, kGslEps);
}

Loss loss_total(const ForwardOutput& out, const SceneSample& sample, const TrainConfig& config) {
  const auto& pairs = out.graph.pairs;
  const int m = sample.gt_predicates.num_predicates();
  Matrix pred_target = Matrix::Zero(static_cast<Eigen::Index>(pairs.size()), m);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    for (int c = 0; c < m; ++c) {
      if (sample.gt_predicates.get(pairs[k].subject, pairs[k].object, c)) {
        pred_target(static_cast<Eigen::Index>(k), c) = 1.0;
      }
    }
  }

  Tensor zero = Tensor::scalar(0.0);
  Tensor l_gsl = config.use_gsl && !pairs.empty() ? loss_gsl(out.gate.pre_gate, sample.skeleton, pairs) : zero;
  Tensor l_p = pairs.empty() ? zero : nn::per_class_bce(out.predicate_logits, pred_target);
  Tensor l_c = config.use_hol ? nn::cross_entropy(out.coarse_logits, sample.gt_coarse) : zero;
  Tensor l_f = nn::cross_entropy(out.fine_logits, sample.gt_fine);

  Loss loss;
  loss.total = nn::add(nn::add(nn::add(l_gsl, l_p), nn::scale(l_c, config.lambda_coarse)),
                       nn::scale(l_f, config.lambda_fine));
  loss.breakdown = {l_gsl.item(), l_p.item(), l_c.item(), l_f.item(), loss.total.item()};
  return loss;
}

nlohmann::json to_json(const EpochRecord& r) {
  return {{"epoch", r.epoch},
          {"loss_total", r.loss.total},
          {"loss_gsl", r.loss.gsl},
          {"loss_predicate", r.loss.predicate},
          {"loss_coarse", r.loss.coarse},
          {"loss_fine", r.loss.fine},
          {"object_R@1", r.object_r1},
          {"predicate_R@1", r.predicate_r1}};
}

namespace {

void check_dataset(const SceneGraphModel& model, std::span<const SceneSample> dataset) {
  if (dataset.empty()) throw ConfigError("train: empty dataset");
  const ModelConfig& c = model.config();
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    const SceneSample& sample = dataset[s];
    auto fail = [&](const std::string& what) {
      throw ConfigError("train: scene " + std::to_string(s) + " does not match the model taxonomy (" + what + ")");
    };
    if (sample.size() == 0) fail("no instances");
    if (sample.gt_predicates.num_predicates() != c.num_predicates) fail("predicate count");
    for (int y : sample.gt_fine) {
      if (y < 0 || y >= c.num_fine) fail("fine label");
    }
    for (int y : sample.gt_coarse) {
      if (y < 0 || y >= c.num_coarse) fail("coarse label");
    }
  }
}

bool all_finite(const LossBreakdown& b) {
  return std::isfinite(b.gsl) && std::isfinite(b.predicate) && std::isfinite(b.coarse) &&
         std::isfinite(b.fine) && std::isfinite(b.total);
}

std::string describe(const LossBreakdown& b) {
  std::ostringstream s;
  s << "total=" << b.total << " gsl=" << b.gsl << " predicate=" << b.predicate
    << " coarse=" << b.coarse << " fine=" << b.fine;
  return s.str();
}

double grad_norm(const nn::ParamStore& params) {
  double sq = 0;
  for (const auto& e : params.entries()) {
    if (e.tensor.grad().size() > 0) sq += e.tensor.grad().squaredNorm();
  }
  return std::sqrt(sq);
}

}  // namespace

TrainResult train(SceneGraphModel& model, std::span<const SceneSample> dataset,
                  const TrainConfig& config, const TrainHooks& hooks) {
  config.validate();
  check_dataset(model, dataset);
  const nn::AdamConfig adam = config.adam();
  TrainResult result;
  result.optimizer = nn::AdamState::zeros_like(model.params());

  ForwardOptions options = ForwardOptions::from(model.config());
  options.iterations = config.iterations;
  options.gating_enabled = config.use_gsl;
  options.hol_enabled = config.use_hol;

  std::vector<std::size_t> order(dataset.size());
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(derive_seed(config.seed, {fnv1a64("shuffle"), static_cast<std::uint64_t>(epoch)}));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    LossBreakdown sum;
    long obj_hits = 0, obj_total = 0, pred_hits = 0, pred_total = 0;
    for (std::size_t idx : order) {
      const SceneSample& sample = dataset[idx];
      options.sample_seed = derive_seed(config.seed, {static_cast<std::uint64_t>(epoch), idx});
      model.params().zero_grad();
      const ForwardOutput out = forward(sample, model, options);
      const Loss loss = loss_total(out, sample, config);
      const std::int64_t step = result.optimizer.step + 1;
      if (!all_finite(loss.breakdown)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", step " +
                           std::to_string(step) + ", scene " + std::to_string(idx) + ": " +
                           describe(loss.breakdown));
      }
      if (config.max_loss > 0 && loss.breakdown.total > config.max_loss) {
        throw NumericError("training diverged at epoch " + std::to_string(epoch) + ", step " +
                           std::to_string(step) + ", scene " + std::to_string(idx) + ": " +
                           describe(loss.breakdown));
      }
      loss.total.backward();
      const double norm = grad_norm(model.params());
      if (!std::isfinite(norm)) {
        throw NumericError("non-finite gradient at epoch " + std::to_string(epoch) + ", step " +
                           std::to_string(step) + ", scene " + std::to_string(idx) + ": " +
                           describe(loss.breakdown));
      }
      if (config.clip_norm > 0) nn::clip_grad_norm(model.params(), config.clip_norm);
      nn::adam_step(model.params(), result.optimizer, adam);
      model.project_gate_parameters();
      if (hooks.on_step) hooks.on_step(result.optimizer.step, loss.breakdown);

      sum.gsl += loss.breakdown.gsl;
      sum.predicate += loss.breakdown.predicate;
      sum.coarse += loss.breakdown.coarse;
      sum.fine += loss.breakdown.fine;
      sum.total += loss.breakdown.total;
      const Prediction pred = to_prediction(out);
      for (const auto& r : metrics::object_ranks(pred.fine_probs, sample.gt_fine)) {
        obj_hits += r.hit(1);
        ++obj_total;
      }
      for (const auto& r : metrics::predicate_ranks(pred.predicate_probs, pred.pairs, sample.gt_predicates)) {
        pred_hits += r.hit(1);
        ++pred_total;
      }
    }

    const double steps = static_cast<double>(dataset.size());
    EpochRecord rec;
    rec.epoch = epoch;
    rec.loss = {sum.gsl / steps, sum.predicate / steps, sum.coarse / steps, sum.fine / steps,
                sum.total / steps};
    rec.object_r1 = obj_total ? 100.0 * obj_hits / obj_total : 0.0;
    rec.predicate_r1 = pred_total ? 100.0 * pred_hits / pred_total : 0.0;
    result.log.push_back(rec);
    if (hooks.on_epoch) hooks.on_epoch(rec);
    if (hooks.on_checkpoint && config.checkpoint_every > 0 && epoch % config.checkpoint_every == 0 &&
        epoch != config.epochs) {
      hooks.on_checkpoint(epoch, model, result.optimizer);
    }
  }
  return result;
}

nlohmann::json checkpoint_header(const SceneGraphModel& model, const Taxonomy& taxonomy,
                                 const TrainConfig* config) {
  nlohmann::json h{{"format", "insg-model"},
                   {"model", to_json(model.config())},
                   {"taxonomy", taxonomy_to_json(taxonomy)},
                   {"taxonomy_hash", hash_hex(taxonomy.hash())}};
  if (config) h["train"] = to_json(*config);
  return h;
}

nn::Checkpoint make_checkpoint(const SceneGraphModel& model, const Taxonomy& taxonomy,
                               const TrainConfig* config, const nn::AdamState* optimizer) {
  return nn::capture(model.params(), checkpoint_header(model, taxonomy, config), optimizer);
}

LoadedModel load_model(const nn::Checkpoint& ckpt) {
  const auto& h = ckpt.header;
  if (!h.is_object() || h.value("format", "") != "insg-model" || !h.contains("model") ||
      !h.contains("taxonomy") || !h.contains("taxonomy_hash")) {
    throw FormatError("checkpoint header is not an insg model header");
  }
  LoadedModel out;
  try {
    out.taxonomy = taxonomy_from_json(h.at("taxonomy"));
  } catch (const ConfigError& e) {
    throw FormatError(std::string("checkpoint taxonomy: ") + e.what());
  }
  if (h.at("taxonomy_hash") != hash_hex(out.taxonomy.hash())) {
    throw FormatError("checkpoint taxonomy hash does not match its taxonomy");
  }
  const ModelConfig mc = model_config_from_json(h.at("model"));
  if (mc.num_coarse != out.taxonomy.num_coarse() || mc.num_fine != out.taxonomy.num_fine() ||
      mc.num_predicates != out.taxonomy.num_predicates()) {
    throw FormatError("checkpoint model config does not match its taxonomy");
  }
  out.model = std::make_unique<SceneGraphModel>(mc);
  try {
    nn::restore(ckpt, out.model->params());
  } catch (const ContractError& e) {
    throw FormatError(std::string("checkpoint parameters: ") + e.what());
  }
  out.header = h;
  return out;
}

}  // namespace insg
