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

// insg: generate synthetic scenes, train, evaluate, predict and inspect
// box-pair geometry.
//
// Exit codes: 0 ok, 2 usage or configuration error, 3 numeric failure,
// 4 malformed or incompatible input file, 1 internal error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "insg/checkpoint.hpp"
#include "insg/errors.hpp"
#include "insg/generator.hpp"
#include "insg/geometry.hpp"
#include "insg/manifest.hpp"
#include "insg/metrics.hpp"
#include "insg/scene_io.hpp"
#include "insg/training.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitFormat = 4;

enum class LogLevel { kQuiet, kInfo, kDebug };

LogLevel log_level() {
  const char* env = std::getenv("INSG_LOG");
  if (!env) return LogLevel::kInfo;
  const std::string v = env;
  if (v == "quiet" || v == "error" || v == "0") return LogLevel::kQuiet;
  if (v == "debug" || v == "2") return LogLevel::kDebug;
  return LogLevel::kInfo;
}

void log(LogLevel level, const std::string& msg) {
  if (log_level() >= level) std::cerr << "insg: " << msg << '\n';
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw insg::ConfigError("cannot create directory " + dir.string());
  }
}

fs::path parent_or_cwd(const fs::path& p) {
  return p.has_parent_path() ? p.parent_path() : fs::path(".");
}

void write_text(const std::string& text, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw insg::ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw insg::ConfigError("write failed: " + path.string());
}

insg::RunManifest start_manifest(const std::string& command, const json& config,
                                 std::uint64_t seed, const insg::Taxonomy& taxonomy) {
  insg::RunManifest m;
  m.command = command;
  m.config_hash = insg::config_hash(config);
  m.seed = seed;
  m.taxonomy_hash = insg::hash_hex(taxonomy.hash());
  m.version = insg::version_string();
  m.started = insg::format_utc(insg::manifest_timestamp());
  return m;
}

void finish_manifest(insg::RunManifest& m, const fs::path& dir) {
  m.finished = insg::format_utc(insg::manifest_timestamp());
  insg::write_manifest(m, dir);
}

insg::LoadedModel read_model(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw insg::ConfigError("no such model file: " + path.string());
  return insg::load_model(insg::nn::read_checkpoint(path));
}

// ---- gen --------------------------------------------------------------------

struct GenArgs {
  int scenes = 0;
  std::uint64_t seed = 0;
  std::string config;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  if (a.scenes < 1) throw insg::ConfigError("--scenes must be >= 1");
  insg::synth::GeneratorConfig config;
  if (!a.config.empty()) {
    config = insg::synth::generator_config_from_json(insg::read_json_file(a.config));
  }
  config.validate();
  const insg::Taxonomy& taxonomy = insg::synth::synthetic_taxonomy();
  const json config_json = insg::synth::to_json(config);
  auto manifest = start_manifest("gen", config_json, a.seed, taxonomy);

  insg::Dataset d;
  d.taxonomy = taxonomy;
  d.scenes = insg::synth::generate_dataset(a.seed, a.scenes, config);
  ensure_dir(a.out);
  insg::save_dataset(d, a.out);
  insg::write_json_file(config_json, fs::path(a.out) / "generator.json", 2);
  manifest.extra = {{"scenes", a.scenes}};
  finish_manifest(manifest, a.out);
  log(LogLevel::kInfo, "wrote " + std::to_string(a.scenes) + " scenes to " + a.out);
  return kExitOk;
}

// ---- train ------------------------------------------------------------------

struct TrainArgs {
  std::string data;
  std::string config;
  std::string out;
};

std::string checkpoint_name(int epoch) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "checkpoint_epoch_%04d.ckpt", epoch);
  return buf;
}

int cmd_train(const TrainArgs& a) {
  if (!fs::is_directory(a.data)) throw insg::ConfigError("no such data directory: " + a.data);
  insg::TrainConfig config;
  if (!a.config.empty()) config = insg::train_config_from_json(insg::read_json_file(a.config));
  const insg::Dataset d = insg::load_dataset(a.data);
  if (d.scenes.empty()) throw insg::ConfigError("no scene files in " + a.data);
  ensure_dir(a.out);
  const fs::path out(a.out);

  const json config_json = insg::to_json(config);
  auto manifest = start_manifest("train", config_json, config.seed, d.taxonomy);
  insg::write_json_file(config_json, out / "train_config.json", 2);

  const std::vector<long> counts =
      insg::metrics::predicate_counts(d.scenes, d.taxonomy.num_predicates());
  auto checkpoint = [&](const insg::SceneGraphModel& model, const insg::nn::AdamState& opt) {
    insg::nn::Checkpoint c = insg::make_checkpoint(model, d.taxonomy, &config, &opt);
    c.header["train_predicate_counts"] = counts;
    return c;
  };

  insg::SceneGraphModel model(config.model_config(d.taxonomy));
  std::ofstream log_file(out / "train_log.jsonl", std::ios::binary | std::ios::trunc);
  if (!log_file) throw insg::ConfigError("cannot write " + (out / "train_log.jsonl").string());

  insg::TrainHooks hooks;
  hooks.on_epoch = [&](const insg::EpochRecord& r) {
    const std::string line = insg::to_json(r).dump();
    log_file << line << '\n';
    log_file.flush();
    log(LogLevel::kDebug, line);
    if (log_level() >= LogLevel::kInfo && (r.epoch == 1 || r.epoch % 10 == 0 || r.epoch == config.epochs)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "epoch %d/%d loss %.5f object R@1 %.2f predicate R@1 %.2f",
                    r.epoch, config.epochs, r.loss.total, r.object_r1, r.predicate_r1);
      log(LogLevel::kInfo, buf);
    }
  };
  hooks.on_checkpoint = [&](int epoch, const insg::SceneGraphModel& m, const insg::nn::AdamState& opt) {
    insg::nn::write_checkpoint(checkpoint(m, opt), out / checkpoint_name(epoch));
  };

  const insg::TrainResult result = insg::train(model, d.scenes, config, hooks);
  insg::nn::write_checkpoint(checkpoint(model, result.optimizer), out / "model.ckpt");
  manifest.extra = {{"scenes", d.scenes.size()}, {"steps", result.optimizer.step}};
  if (!result.log.empty()) manifest.extra["final_loss"] = result.log.back().loss.total;
  finish_manifest(manifest, out);
  log(LogLevel::kInfo, "wrote " + (out / "model.ckpt").string());
  return kExitOk;
}

// ---- eval -------------------------------------------------------------------

struct EvalArgs {
  std::string model;
  std::string data;
  std::string report;
};

void require_same_taxonomy(const insg::Taxonomy& model, const insg::Taxonomy& data) {
  if (model.hash() != data.hash()) {
    throw insg::FormatError("taxonomy mismatch: model " + insg::hash_hex(model.hash()) + ", data " +
                            insg::hash_hex(data.hash()));
  }
}

int cmd_eval(const EvalArgs& a) {
  if (!fs::is_directory(a.data)) throw insg::ConfigError("no such data directory: " + a.data);
  insg::LoadedModel lm = read_model(a.model);
  require_same_taxonomy(lm.taxonomy, insg::load_taxonomy(fs::path(a.data) / insg::kTaxonomyFile));
  const insg::Dataset d = insg::load_dataset(a.data);
  if (d.scenes.empty()) throw insg::ConfigError("no scene files in " + a.data);

  const json config_json = {{"model", lm.header.at("model")}, {"data_scenes", d.scenes.size()}};
  auto manifest = start_manifest("eval", config_json, 0, d.taxonomy);

  std::vector<long> counts;
  if (lm.header.contains("train_predicate_counts")) {
    counts = lm.header.at("train_predicate_counts").get<std::vector<long>>();
  } else {
    counts = insg::metrics::predicate_counts(d.scenes, d.taxonomy.num_predicates());
  }
  if (static_cast<int>(counts.size()) != d.taxonomy.num_predicates()) {
    throw insg::FormatError("checkpoint predicate counts do not match the taxonomy");
  }

  const insg::ForwardOptions options =
      insg::ForwardOptions::from(lm.model->config(), insg::kEvalSampleSeed);
  std::vector<insg::Prediction> predictions;
  {
    insg::nn::NoGradGuard no_grad;
    for (const auto& s : d.scenes) predictions.push_back(insg::predict(s, *lm.model, options));
  }
  const auto report = insg::metrics::evaluate(predictions, d.scenes, d.taxonomy, counts);

  const fs::path report_path(a.report);
  const fs::path dir = parent_or_cwd(report_path);
  ensure_dir(dir);
  insg::write_json_file(insg::metrics::to_json(report), report_path, 2);
  fs::path csv = report_path;
  csv.replace_extension(".csv");
  write_text(insg::metrics::per_predicate_csv(report), csv);
  finish_manifest(manifest, dir);
  log(LogLevel::kInfo, "wrote " + report_path.string());
  return kExitOk;
}

// ---- predict ----------------------------------------------------------------

struct PredictArgs {
  std::string model;
  std::string scene;
  std::string out;
  double threshold = 0.5;
};

int cmd_predict(const PredictArgs& a) {
  if (!(a.threshold >= 0.0 && a.threshold <= 1.0)) throw insg::ConfigError("--threshold must be in [0, 1]");
  insg::LoadedModel lm = read_model(a.model);
  if (!fs::is_regular_file(a.scene)) throw insg::ConfigError("no such scene file: " + a.scene);
  const insg::SceneSample scene = insg::load_scene(a.scene, lm.taxonomy);
  const json config_json = {{"model", lm.header.at("model")}, {"threshold", a.threshold}};
  auto manifest = start_manifest("predict", config_json, 0, lm.taxonomy);

  insg::Prediction p;
  {
    insg::nn::NoGradGuard no_grad;
    p = insg::predict(scene, *lm.model,
                      insg::ForwardOptions::from(lm.model->config(), insg::kEvalSampleSeed));
  }
  const int n = scene.size();
  std::vector<int> fine(n);
  json labels = json::array();
  for (int i = 0; i < n; ++i) {
    const auto row = std::span<const double>(p.fine_probs.data() + i * p.fine_probs.cols(),
                                             static_cast<std::size_t>(p.fine_probs.cols()));
    fine[i] = insg::metrics::argmax(row);
    const int coarse = lm.taxonomy.fine_to_coarse[fine[i]];
    labels.push_back({{"id", scene.instances[i].id},
                      {"fine", fine[i]},
                      {"coarse", coarse},
                      {"fine_name", lm.taxonomy.fine_classes[fine[i]]},
                      {"score", p.fine_probs(i, fine[i])}});
  }
  json triplets = json::array();
  json scores = json::array();
  json skeleton = json::array();
  for (std::size_t k = 0; k < p.pairs.size(); ++k) {
    const auto [i, j] = p.pairs[k];
    const auto r = static_cast<Eigen::Index>(k);
    for (Eigen::Index c = 0; c < p.predicate_probs.cols(); ++c) {
      if (p.predicate_probs(r, c) >= a.threshold) {
        triplets.push_back({i, j, c});
        scores.push_back(p.fine_probs(i, fine[i]) * p.predicate_probs(r, c) * p.fine_probs(j, fine[j]));
      }
    }
    if (p.rules(r, 0) > 0.0) skeleton.push_back({i, j});
  }
  const json graph = {{"version", insg::kFormatVersion},
                      {"taxonomy_hash", insg::hash_hex(lm.taxonomy.hash())},
                      {"labels", std::move(labels)},
                      {"triplets", std::move(triplets)},
                      {"triplet_scores", std::move(scores)},
                      {"skeleton", std::move(skeleton)}};
  const fs::path out(a.out);
  ensure_dir(parent_or_cwd(out));
  insg::write_json_file(graph, out, 2);
  finish_manifest(manifest, parent_or_cwd(out));
  return kExitOk;
}

// ---- geom -------------------------------------------------------------------

insg::geometry::Aabb box_from_json(const json& j, const char* key) {
  try {
    const json& b = j.at(key);
    insg::geometry::Aabb box;
    for (int d = 0; d < 3; ++d) {
      box.min[d] = b.at("min").at(d).get<double>();
      box.max[d] = b.at("max").at(d).get<double>();
    }
    insg::geometry::validate(box);
    return box;
  } catch (const nlohmann::json::exception& e) {
    throw insg::FormatError(std::string("pair file: box '") + key + "': " + e.what());
  } catch (const insg::ContractError& e) {
    throw insg::FormatError(std::string("pair file: box '") + key + "': " + e.what());
  }
}

json box_json(const insg::geometry::Aabb& b) {
  return {{"min", {b.min[0], b.min[1], b.min[2]}}, {"max", {b.max[0], b.max[1], b.max[2]}}};
}

int cmd_geom(const std::string& pair_file) {
  if (!fs::is_regular_file(pair_file)) throw insg::ConfigError("no such pair file: " + pair_file);
  const json j = insg::read_json_file(pair_file);
  const auto a = box_from_json(j, "subject");
  const auto b = box_from_json(j, "object");
  namespace g = insg::geometry;
  const g::RelativePosition rp = g::classify_relative_position(a, b);
  json out{{"relative_position", rp.label()},
           {"interaction_space", box_json(g::interaction_space(a, b))},
           {"union", box_json(g::union_box(a, b))},
           {"position_vector", g::position_vector(a, b)}};
  if (rp.intersectant()) out["intersection"] = box_json(g::intersection_box(a, b));
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const insg::NumericError& e) {
    std::cerr << "insg: numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const insg::FormatError& e) {
    std::cerr << "insg: format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const insg::ConfigError& e) {
    std::cerr << "insg: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "insg: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "insg: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3D scene graph generation on synthetic point-cloud scenes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(insg::version_string()));

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset");
  gen_cmd->add_option("--scenes", gen.scenes, "Number of scenes")->required();
  gen_cmd->add_option("--seed", gen.seed, "Dataset seed")->required();
  gen_cmd->add_option("--config", gen.config, "Generator config JSON");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a model on a dataset");
  train_cmd->add_option("--data", train.data, "Dataset directory")->required();
  train_cmd->add_option("--config", train.config, "Training config JSON");
  train_cmd->add_option("--out", train.out, "Output directory")->required();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on a dataset");
  eval_cmd->add_option("--model", eval.model, "Checkpoint file")->required();
  eval_cmd->add_option("--data", eval.data, "Dataset directory")->required();
  eval_cmd->add_option("--report", eval.report, "Report JSON path")->required();

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "Predict the scene graph of one scene");
  predict_cmd->add_option("--model", predict.model, "Checkpoint file")->required();
  predict_cmd->add_option("--scene", predict.scene, "Scene JSON file")->required();
  predict_cmd->add_option("--out", predict.out, "Output graph JSON path")->required();
  predict_cmd->add_option("--threshold", predict.threshold, "Predicate probability threshold");

  std::string pair_file;
  auto* geom_cmd = app.add_subcommand("geom", "Inspect the geometry of a box pair");
  geom_cmd->add_option("--pair", pair_file, "Pair JSON file {subject, object}")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*gen_cmd) return guarded([&] { return cmd_gen(gen); });
  if (*train_cmd) return guarded([&] { return cmd_train(train); });
  if (*eval_cmd) return guarded([&] { return cmd_eval(eval); });
  if (*predict_cmd) return guarded([&] { return cmd_predict(predict); });
  if (*geom_cmd) return guarded([&] { return cmd_geom(pair_file); });
  return kExitUsage;
}
