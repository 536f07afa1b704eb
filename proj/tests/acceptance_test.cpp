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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is non-zero
// when any criterion fails. Pass criterion names as arguments to run a subset.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cli_support.hpp"
#include "grad_suite.hpp"
#include "insg/generator.hpp"
#include "insg/geometry.hpp"
#include "insg/metrics.hpp"
#include "insg/scene_io.hpp"
#include "insg/training.hpp"
#include "metric_suite.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;
namespace g = insg::geometry;
using insg::nn::Matrix;
using insg::nn::Tensor;
using nlohmann::json;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---- geometry --------------------------------------------------------------

g::Aabb random_box(std::mt19937_64& rng, bool grid) {
  g::Aabb b;
  if (grid) {
    std::uniform_int_distribution<int> at(-8, 8), size(0, 6);
    for (int d = 0; d < 3; ++d) {
      b.min[d] = at(rng) * 0.25;
      b.max[d] = b.min[d] + size(rng) * 0.25;
    }
    return b;
  }
  std::uniform_real_distribution<double> u(-3, 3);
  for (int d = 0; d < 3; ++d) {
    const double p = u(rng), q = u(rng);
    b.min[d] = std::min(p, q);
    b.max[d] = std::max(p, q);
  }
  return b;
}

Outcome geometry_oracle() {
  Stopwatch sw;
  std::mt19937_64 rng(20260);
  int mismatches = 0;
  for (int k = 0; k < 1000; ++k) {
    const bool grid = k % 2 == 1;
    const g::Aabb a = random_box(rng, grid), b = random_box(rng, grid);
    const oracle::Box oa{a.min[0], a.min[1], a.min[2], a.max[0], a.max[1], a.max[2]};
    const oracle::Box ob{b.min[0], b.min[1], b.min[2], b.max[0], b.max[1], b.max[2]};
    const auto d = oracle::disjoint(oa, ob);
    const auto rp = g::classify_relative_position(a, b);
    bool ok = rp.disjoint_axes.contains(g::Axis::kX) == d.x &&
              rp.disjoint_axes.contains(g::Axis::kY) == d.y &&
              rp.disjoint_axes.contains(g::Axis::kZ) == d.z;
    if (!d.any()) {
      const bool inclusive = oracle::inside(oa, ob) || oracle::inside(ob, oa);
      ok = ok && rp.intersect_kind ==
                     (inclusive ? g::IntersectKind::kInclusive : g::IntersectKind::kOverlap);
    }
    const g::Aabb got = g::interaction_space(a, b);
    const oracle::Box want = oracle::interaction(oa, ob);
    ok = ok && got.min[0] == want.x1 && got.min[1] == want.y1 && got.min[2] == want.z1 &&
         got.max[0] == want.x2 && got.max[1] == want.y2 && got.max[2] == want.z2;
    mismatches += ok ? 0 : 1;
  }
  const double t = sw.seconds();
  return {mismatches == 0 && t < 5.0,
          std::to_string(mismatches) + " mismatches on 1000 pairs, " + fmt("%.3f s", t)};
}

// ---- gradients -------------------------------------------------------------

Outcome gradient_suite() {
  Stopwatch sw;
  const auto cases = grad_suite::cases();
  std::string worst;
  double worst_ratio = 0;
  int failures = 0;
  for (const auto& c : cases) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto r = c.run(seed);
      const double ratio = r.max_rel_error / c.tolerance;
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst = c.name + " seed " + std::to_string(seed) + fmt(" rel %.2e", r.max_rel_error);
      }
      failures += r.max_rel_error <= c.tolerance ? 0 : 1;
    }
  }
  const double t = sw.seconds();
  return {failures == 0 && t < 60.0,
          std::to_string(cases.size()) + " cases x 20 seeds, " + std::to_string(failures) +
              " failures, worst " + worst + ", " + fmt("%.1f s", t)};
}

// ---- gate ------------------------------------------------------------------

double three_branch(double x, double alpha, double beta) {
  if (x <= beta) return 0.0;
  if (x < 1 / alpha + beta) return alpha * x - alpha * beta;
  return 1.0;
}

Outcome gate_exactness() {
  int mismatches = 0, points = 0;
  const std::pair<double, double> params[] = {{2.2, 0.025}, {1.0, 0.0}, {4.0, 0.3}, {0.7, 0.1}};
  for (const auto& [alpha, beta] : params) {
    Matrix x(1000, 1);
    for (int k = 0; k < 1000; ++k) x(k, 0) = -0.5 + 2.0 * k / 999.0;
    x(0, 0) = beta;
    x(1, 0) = 1 / alpha + beta;
    const Matrix y = insg::nn::gate(Tensor::constant(x), Tensor::constant(Matrix::Constant(1, 1, alpha)),
                                    Tensor::constant(Matrix::Constant(1, 1, beta)))
                         .value();
    for (int k = 0; k < 1000; ++k) mismatches += y(k, 0) == three_branch(x(k, 0), alpha, beta) ? 0 : 1;
    mismatches += y(0, 0) == 0.0 ? 0 : 1;
    mismatches += y(1, 0) == 1.0 ? 0 : 1;
    points += 1000;
  }
  return {mismatches == 0, std::to_string(points) + " points, " + std::to_string(mismatches) +
                               " mismatches, endpoints 0 and 1 checked"};
}

// ---- blocked edge ----------------------------------------------------------

Outcome blocked_edge() {
  const insg::TrainConfig tc;
  const insg::SceneGraphModel model(tc.model_config(insg::synth::synthetic_taxonomy()));
  std::mt19937_64 rng(5);
  double worst = 0;
  int edges = 0;
  insg::nn::NoGradGuard no_grad;
  for (int s = 0; s < 10; ++s) {
    const insg::SceneSample scene = insg::synth::generate_scene(300 + s, {});
    const insg::FeatureGraph fg =
        insg::build_feature_graph(scene, model.encoders, model.config().encoder_options(), 0);
    const Eigen::Index R = fg.relation.rows();
    std::uniform_int_distribution<Eigen::Index> pick(0, R - 1);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::normal_distribution<double> noise;
    const Eigen::Index k = pick(rng);
    Matrix rules(R, 1);
    for (Eigen::Index r = 0; r < R; ++r) rules(r, 0) = u(rng);
    rules(k, 0) = 0.0;
    const auto base = insg::run_message_passing(fg, Tensor::constant(rules), model, 3);
    insg::FeatureGraph moved = fg;
    Matrix rel = fg.relation.value();
    for (Eigen::Index c = 0; c < rel.cols(); ++c) rel(k, c) += noise(rng);
    moved.relation = Tensor::constant(rel);
    const auto out = insg::run_message_passing(moved, Tensor::constant(rules), model, 3);
    worst = std::max(worst, (out.entity.back().value() - base.entity.back().value()).cwiseAbs().maxCoeff());
    ++edges;
  }
  return {worst <= 1e-12, std::to_string(edges) + " blocked edges, max entity diff " + fmt("%.3g", worst)};
}

// ---- overfit ---------------------------------------------------------------

Outcome overfit() {
  Stopwatch sw;
  const fs::path root = cli::fresh_dir("acceptance_overfit");
  const std::string data = (root / "data").string();
  if (cli::run("gen --scenes 20 --seed 0 --out " + data) != 0) return {false, "gen failed"};
  if (cli::run("train --data " + data + " --config " + cli::config_path("overfit.json") + " --out " +
               (root / "run").string()) != 0) {
    return {false, "train failed"};
  }
  const fs::path report = root / "eval" / "report.json";
  if (cli::run("eval --model " + (root / "run" / "model.ckpt").string() + " --data " + data +
               " --report " + report.string()) != 0) {
    return {false, "eval failed"};
  }
  const double t = sw.seconds();
  const json r = json::parse(cli::read_bytes(report));
  const double obj = r["object"]["R@1"], pred = r["predicate"]["R@1"], rel = r["relationship"]["R@50"];
  fs::remove_all(root);
  return {obj >= 95 && pred >= 95 && rel >= 90 && t <= 600,
          "object R@1 " + fmt("%.2f", obj) + ", predicate R@1 " + fmt("%.2f", pred) +
              ", relationship R@50 " + fmt("%.2f", rel) + ", " + fmt("%.0f s", t)};
}

// ---- ablation --------------------------------------------------------------

insg::TrainConfig load_train_config(const std::string& name) {
  return insg::train_config_from_json(insg::read_json_file(cli::config_path(name)));
}

double test_relationship_r50(const insg::SceneGraphModel& model,
                             const std::vector<insg::SceneSample>& train,
                             const std::vector<insg::SceneSample>& test) {
  insg::nn::NoGradGuard no_grad;
  const auto opts = insg::ForwardOptions::from(model.config(), insg::kEvalSampleSeed);
  std::vector<insg::Prediction> preds;
  for (const auto& s : test) preds.push_back(insg::predict(s, model, opts));
  const auto& tax = insg::synth::synthetic_taxonomy();
  const auto rep = insg::metrics::evaluate(preds, test, tax,
                                           insg::metrics::predicate_counts(train, tax.num_predicates()));
  return rep.relationship[0].recall.value_or(0.0);
}

Outcome ablation() {
  const auto& tax = insg::synth::synthetic_taxonomy();
  bool pass = true;
  std::string detail;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto train = insg::synth::generate_dataset(1000 + seed, 200, {});
    const auto test = insg::synth::generate_dataset(2000 + seed, 50, {});
    double r50[2];
    double secs[2];
    const char* names[2] = {"ablation_full.json", "ablation_m0.json"};
    for (int v = 0; v < 2; ++v) {
      Stopwatch sw;
      insg::TrainConfig tc = load_train_config(names[v]);
      tc.seed = seed;
      insg::SceneGraphModel model(tc.model_config(tax));
      insg::train(model, train, tc);
      r50[v] = test_relationship_r50(model, train, test);
      secs[v] = sw.seconds();
      pass = pass && secs[v] <= 1800;
    }
    pass = pass && r50[0] > r50[1];
    detail += "seed " + std::to_string(seed) + ": full " + fmt("%.2f", r50[0]) + " vs M0 " +
              fmt("%.2f", r50[1]) + " (" + fmt("%.0f s", secs[0]) + ", " + fmt("%.0f s", secs[1]) + "); ";
    std::fprintf(stderr, "ablation %s\n", detail.c_str());
  }
  return {pass, detail};
}

// ---- metrics ---------------------------------------------------------------

Outcome metric_oracles() {
  const auto r = metric_suite::run(100, 0);
  return {r.mismatches == 0 && r.comparisons > 0,
          std::to_string(r.comparisons) + " comparisons on 100 scenes, " +
              std::to_string(r.mismatches) + " mismatches" +
              (r.first_mismatch.empty() ? "" : " (" + r.first_mismatch + ")")};
}

// ---- determinism -----------------------------------------------------------

Outcome determinism() {
  const fs::path root = cli::fresh_dir("acceptance_determinism");
  const fs::path cfg = root / "train.json";
  cli::write_text(cfg, R"({"epochs": 3, "points_per_region": 64, "lr": 0.001, "seed": 11, "checkpoint_every": 1})");
  std::map<std::string, std::string> snaps[2];
  for (int r = 0; r < 2; ++r) {
    const fs::path dir = root / ("run" + std::to_string(r));
    const std::string data = (dir / "data").string();
    if (cli::run("gen --scenes 6 --seed 3 --out " + data) != 0 ||
        cli::run("train --data " + data + " --config " + cfg.string() + " --out " + (dir / "train").string()) != 0 ||
        cli::run("eval --model " + (dir / "train" / "model.ckpt").string() + " --data " + data +
                 " --report " + (dir / "eval" / "report.json").string()) != 0) {
      return {false, "command failed"};
    }
    snaps[r] = cli::snapshot(dir);
  }
  std::string diff;
  for (const auto& [name, bytes] : snaps[0]) {
    auto it = snaps[1].find(name);
    if (it == snaps[1].end() || it->second != bytes) diff += name + " ";
  }
  const bool same = diff.empty() && snaps[0].size() == snaps[1].size();
  const std::size_t files = snaps[0].size();
  fs::remove_all(root);
  return {same, std::to_string(files) + " files from gen/train/eval" +
                    (same ? " byte-identical" : ", differing: " + diff)};
}

// ---- default constants -----------------------------------------------------

Outcome default_constants() {
  const insg::ModelConfig m;
  const insg::TrainConfig t;
  const bool ok = m.alpha_init == 2.2 && m.beta_init == 0.025 && t.lambda_coarse == 0.1 &&
                  t.lambda_fine == 0.1 && t.lr == 1e-4 && m.iterations == 3;
  return {ok, "alpha 2.2, beta 0.025, lambda_c = lambda_f = 0.1, Adam lr 1e-4 by default"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"geometry_oracle", geometry_oracle},
      {"gradient_suite", gradient_suite},
      {"gate_exactness", gate_exactness},
      {"blocked_edge_invariance", blocked_edge},
      {"metric_oracles", metric_oracles},
      {"default_constants", default_constants},
      {"determinism", determinism},
      {"overfit", overfit},
      {"ablation_direction", ablation},
  };
  const std::set<std::string> only(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && !only.count(name)) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
