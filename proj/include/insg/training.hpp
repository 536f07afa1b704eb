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

// Composite loss and the end-to-end training loop. One scene per optimizer
// step; the visiting order of every epoch is a seeded shuffle.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "json.hpp"

#include "insg/adam.hpp"
#include "insg/checkpoint.hpp"
#include "insg/reasoning.hpp"
#include "insg/scene.hpp"

namespace insg {

inline constexpr double kGslEps = 1e-7;

struct TrainConfig {
  int epochs = 300;
  std::uint64_t seed = 0;
  double lr = 1e-4;
  double lambda_coarse = 0.1;
  double lambda_fine = 0.1;
  int iterations = 3;
  bool use_ins = true;
  bool use_pos = true;
  bool use_gsl = true;
  bool use_hol = true;
  int points_per_region = 256;
  double clip_norm = 0.0;  // 0 disables clipping
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  int checkpoint_every = 0;  // epochs between intermediate checkpoints, 0 = final only
  // A step loss above this aborts training as diverged; 0 disables the check.
  double max_loss = 1e6;

  void validate() const;
  nn::AdamConfig adam() const;
  ModelConfig model_config(const Taxonomy& taxonomy) const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

nlohmann::json to_json(const TrainConfig& c);
// Missing keys keep their defaults; unknown keys are a ConfigError.
TrainConfig train_config_from_json(const nlohmann::json& j);

struct LossBreakdown {
  double gsl = 0;
  double predicate = 0;
  double coarse = 0;
  double fine = 0;
  double total = 0;
};

double weighted_total(double gsl, double predicate, double coarse, double fine,
                      double lambda_coarse, double lambda_fine);

// Mean BCE of the pre-gate probability of every pair against the skeleton.
nn::Tensor loss_gsl(const nn::Tensor& pre_gate, const Skeleton& skeleton,
                    const std::vector<PairIndex>& pairs);

struct Loss {
  nn::Tensor total;
  LossBreakdown breakdown;
};

// Disabled components contribute exactly 0.
Loss loss_total(const ForwardOutput& out, const SceneSample& sample, const TrainConfig& config);

struct EpochRecord {
  int epoch = 0;  // 1-based
  LossBreakdown loss;  // mean over the epoch's steps
  // Running training-set recall of the forward passes made during the epoch.
  double object_r1 = 0;
  double predicate_r1 = 0;
};

nlohmann::json to_json(const EpochRecord& r);

struct TrainHooks {
  std::function<void(const EpochRecord&)> on_epoch;
  // Called every checkpoint_every epochs (not after the last one).
  std::function<void(int epoch, const SceneGraphModel&, const nn::AdamState&)> on_checkpoint;
  // Called after each optimizer step with the step's loss.
  std::function<void(std::int64_t step, const LossBreakdown&)> on_step;
};

struct TrainResult {
  std::vector<EpochRecord> log;
  nn::AdamState optimizer;
};

// Throws ConfigError on an empty dataset or labels outside the model's
// classes, NumericError when a loss or gradient becomes non-finite.
TrainResult train(SceneGraphModel& model, std::span<const SceneSample> dataset,
                  const TrainConfig& config, const TrainHooks& hooks = {});

// Seed used for point resampling at evaluation time.
inline constexpr std::uint64_t kEvalSampleSeed = 0;

// Checkpoint header: {"format": "insg-model", "model": ..., "taxonomy": ...,
// "taxonomy_hash": ..., "train": ...}.
nlohmann::json checkpoint_header(const SceneGraphModel& model, const Taxonomy& taxonomy,
                                 const TrainConfig* config);
nn::Checkpoint make_checkpoint(const SceneGraphModel& model, const Taxonomy& taxonomy,
                               const TrainConfig* config, const nn::AdamState* optimizer);

struct LoadedModel {
  std::unique_ptr<SceneGraphModel> model;
  Taxonomy taxonomy;
  nlohmann::json header;
};
// Rebuilds the model from a checkpoint. Throws FormatError on a malformed
// header or parameter mismatch.
LoadedModel load_model(const nn::Checkpoint& ckpt);

}  // namespace insg
