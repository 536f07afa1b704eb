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

#include "insg/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "insg/errors.hpp"
#include "insg/rng.hpp"
#include "json_fields.hpp"

namespace insg::synth {

namespace {

enum class Primitive { kBox, kSlab, kCylinder };
enum class Placement { kFloor, kOnSupport };

struct Template {
  const char* name;
  int coarse;
  Primitive primitive;
  Vec3 size;
  Placement placement;
  bool is_support;
  bool is_seat;
};

enum Fine : int {
  kChair = 0,
  kStool,
  kTable,
  kDiningTable,
  kPillar,
  kWallPanel,
  kShelf,
  kFridge,
  kLamp,
  kTv,
  kBottle,
  kBook,
  kNumFine,
};

// Coarse ids: 0 furniture, 1 structure, 2 appliance, 3 item.
constexpr Template kTemplates[kNumFine] = {
    {"chair", 0, Primitive::kBox, {0.45, 0.45, 0.90}, Placement::kFloor, false, true},
    {"stool", 0, Primitive::kCylinder, {0.36, 0.36, 0.45}, Placement::kFloor, false, true},
    {"table", 0, Primitive::kSlab, {1.20, 0.80, 0.75}, Placement::kFloor, true, false},
    {"dining table", 0, Primitive::kSlab, {1.20, 0.80, 0.75}, Placement::kFloor, true, false},
    {"pillar", 1, Primitive::kCylinder, {0.50, 0.50, 2.40}, Placement::kFloor, false, false},
    {"wall panel", 1, Primitive::kSlab, {1.50, 0.10, 2.20}, Placement::kFloor, false, false},
    {"shelf", 1, Primitive::kBox, {0.90, 0.30, 1.80}, Placement::kFloor, true, false},
    {"fridge", 2, Primitive::kBox, {0.70, 0.70, 1.70}, Placement::kFloor, true, false},
    {"lamp", 2, Primitive::kCylinder, {0.24, 0.24, 0.45}, Placement::kOnSupport, false, false},
    {"tv", 2, Primitive::kSlab, {0.90, 0.08, 0.55}, Placement::kOnSupport, false, false},
    {"bottle", 3, Primitive::kCylinder, {0.08, 0.08, 0.25}, Placement::kOnSupport, false, false},
    {"book", 3, Primitive::kSlab, {0.22, 0.16, 0.04}, Placement::kOnSupport, false, false},
};

// Templates the placer draws from; dining tables come from the context rule.
constexpr int kFloorKinds[] = {kChair, kStool, kTable, kPillar, kWallPanel, kShelf, kFridge};
constexpr int kTopKinds[] = {kLamp, kTv, kBottle, kBook};

Taxonomy build_taxonomy() {
  Taxonomy t;
  t.coarse_classes = {"furniture", "structure", "appliance", "item"};
  for (const Template& tpl : kTemplates) {
    t.fine_classes.emplace_back(tpl.name);
    t.fine_to_coarse.push_back(tpl.coarse);
  }
  t.predicate_classes = {"left",        "right",       "front",    "behind", "higher than",
                         "lower than",  "standing on", "attached to", "same as"};
  t.validate();
  return t;
}

// Signed separation of two intervals: > 0 apart, < 0 overlapping.
double signed_gap(double amin, double amax, double bmin, double bmax) {
  return std::max(amin, bmin) - std::min(amax, bmax);
}

double horizontal_gap(const Aabb& a, const Aabb& b) {
  const double gx = std::max(0.0, signed_gap(a.min[0], a.max[0], b.min[0], b.max[0]));
  const double gy = std::max(0.0, signed_gap(a.min[1], a.max[1], b.min[1], b.max[1]));
  return std::hypot(gx, gy);
}

bool is_seat(int fine) { return kTemplates[fine].is_seat; }

struct Placed {
  int kind;  // template index
  Aabb box;  // ideal (noise-free) box
  int clone_of = -1;
  int placed_on = -1;
};

class SceneBuilder {
 public:
  SceneBuilder(std::uint64_t seed, const GeneratorConfig& config)
      : rng_(mix_seed(seed)), config_(config) {}

  GeneratedScene build() {
    const int n = uniform_int(config_.min_entities, config_.max_entities);
    int attempts = 0;
    while (static_cast<int>(placed_.size()) < n) {
      if (++attempts > 2000) throw ConfigError("generator: could not place objects; room too small");
      std::optional<Placed> p = propose();
      if (p && fits(*p)) placed_.push_back(*p);
    }
    return finish();
  }

 private:
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int uniform_int(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }
  template <std::size_t N>
  int pick(const int (&kinds)[N]) {
    return kinds[uniform_int(0, static_cast<int>(N) - 1)];
  }

  Vec3 jittered(const Vec3& size) {
    const double j = config_.size_jitter;
    return {size[0] * uniform(1 - j, 1 + j), size[1] * uniform(1 - j, 1 + j),
            size[2] * uniform(1 - j, 1 + j)};
  }

  static Aabb box_at(double cx, double cy, double zmin, const Vec3& size) {
    return Aabb{{cx - size[0] / 2, cy - size[1] / 2, zmin},
                {cx + size[0] / 2, cy + size[1] / 2, zmin + size[2]}};
  }

  std::vector<int> indices_where(bool (*pred)(const Placed&)) const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(placed_.size()); ++i) {
      if (pred(placed_[i])) out.push_back(i);
    }
    return out;
  }

  std::optional<Placed> propose() {
    const auto floor_objs = indices_where(
        [](const Placed& p) { return kTemplates[p.kind].placement == Placement::kFloor; });
    const auto supports = indices_where([](const Placed& p) { return kTemplates[p.kind].is_support; });

    if (!floor_objs.empty() && chance(config_.clone_probability)) {
      const int src = floor_objs[uniform_int(0, static_cast<int>(floor_objs.size()) - 1)];
      const Vec3 size = placed_[src].box.extent();
      Placed p{placed_[src].kind, random_floor_box(size), src, -1};
      return p;
    }
    if (!supports.empty() && chance(config_.support_probability)) {
      const int base = supports[uniform_int(0, static_cast<int>(supports.size()) - 1)];
      const int kind = pick(kTopKinds);
      const Vec3 size = jittered(kTemplates[kind].size);
      const Aabb& sb = placed_[base].box;
      const double sx = sb.extent()[0], sy = sb.extent()[1];
      if (size[0] > sx || size[1] > sy) return std::nullopt;
      const double cx = uniform(sb.min[0] + size[0] / 2, sb.max[0] - size[0] / 2);
      const double cy = uniform(sb.min[1] + size[1] / 2, sb.max[1] - size[1] / 2);
      return Placed{kind, box_at(cx, cy, sb.max[2], size), -1, base};
    }
    const int kind = pick(kFloorKinds);
    const Vec3 size = jittered(kTemplates[kind].size);
    const auto tables = indices_where([](const Placed& p) { return p.kind == kTable; });
    if (kTemplates[kind].is_seat && !tables.empty() && chance(config_.seat_near_table_probability)) {
      const int t = tables[uniform_int(0, static_cast<int>(tables.size()) - 1)];
      return Placed{kind, beside(placed_[t].box, size, uniform(0.1, 0.35)), -1, -1};
    }
    if (!floor_objs.empty() && chance(config_.flush_probability)) {
      const int t = floor_objs[uniform_int(0, static_cast<int>(floor_objs.size()) - 1)];
      return Placed{kind, beside(placed_[t].box, size, 0.0), -1, -1};
    }
    return Placed{kind, random_floor_box(size), -1, -1};
  }

  Aabb random_floor_box(const Vec3& size) {
    const double cx = uniform(size[0] / 2, config_.room_x - size[0] / 2);
    const double cy = uniform(size[1] / 2, config_.room_y - size[1] / 2);
    return box_at(cx, cy, 0.0, size);
  }

  // Floor box next to `ref` on a random side, separated by `gap`, overlapping
  // `ref` along the side by at least 0.1 m where possible.
  Aabb beside(const Aabb& ref, const Vec3& size, double gap) {
    const int side = uniform_int(0, 3);
    const int axis = side / 2;
    const int other = 1 - axis;
    Vec3 c{};
    if (side % 2 == 0) {
      c[axis] = ref.min[axis] - gap - size[axis] / 2;
    } else {
      c[axis] = ref.max[axis] + gap + size[axis] / 2;
    }
    const double lo = ref.min[other] + 0.1 - size[other] / 2;
    const double hi = ref.max[other] - 0.1 + size[other] / 2;
    c[other] = lo < hi ? uniform(lo, hi) : (ref.min[other] + ref.max[other]) / 2;
    return box_at(c[0], c[1], 0.0, size);
  }

  bool fits(const Placed& p) const {
    const Aabb& b = p.box;
    if (b.min[0] < 0 || b.min[1] < 0 || b.max[0] > config_.room_x || b.max[1] > config_.room_y) {
      return false;
    }
    for (const Placed& q : placed_) {
      if (p.placed_on >= 0) {
        // Only objects sharing the support surface can collide.
        if (q.placed_on != p.placed_on) continue;
        if (signed_gap(b.min[0], b.max[0], q.box.min[0], q.box.max[0]) < 0.02 &&
            signed_gap(b.min[1], b.max[1], q.box.min[1], q.box.max[1]) < 0.02) {
          return false;
        }
        continue;
      }
      if (q.placed_on >= 0) continue;
      const double gx = signed_gap(b.min[0], b.max[0], q.box.min[0], q.box.max[0]);
      const double gy = signed_gap(b.min[1], b.max[1], q.box.min[1], q.box.max[1]);
      // Flush placements touch (gap 0) but never interpenetrate.
      if (gx < -1e-9 && gy < -1e-9) return false;
      if (gx < 0.05 && gy < 0.05 && !(std::abs(gx) < 1e-9 || std::abs(gy) < 1e-9)) return false;
    }
    return true;
  }

  std::vector<Vec3> sample_surface(const Placed& p) {
    const Primitive prim = kTemplates[p.kind].primitive;
    const Aabb& b = p.box;
    const Vec3 e = b.extent();
    const Vec3 c = b.center();
    const int count = uniform_int(config_.min_points, config_.max_points);
    std::normal_distribution<double> noise(0.0, config_.noise_sigma);
    std::vector<Vec3> pts;
    pts.reserve(count);
    if (prim == Primitive::kCylinder) {
      const double r = std::min(e[0], e[1]) / 2;
      const double side = 2 * std::numbers::pi * r * e[2];
      const double cap = std::numbers::pi * r * r;
      for (int k = 0; k < count; ++k) {
        const double u = uniform(0.0, side + 2 * cap);
        const double theta = uniform(0.0, 2 * std::numbers::pi);
        Vec3 q;
        if (u < side) {
          q = {c[0] + r * std::cos(theta), c[1] + r * std::sin(theta), uniform(b.min[2], b.max[2])};
        } else {
          const double rr = r * std::sqrt(uniform(0.0, 1.0));
          q = {c[0] + rr * std::cos(theta), c[1] + rr * std::sin(theta),
               u < side + cap ? b.min[2] : b.max[2]};
        }
        for (double& v : q) v += noise(rng_);
        pts.push_back(q);
      }
      return pts;
    }
    // Box and slab: area-weighted faces.
    const double areas[3] = {e[1] * e[2], e[0] * e[2], e[0] * e[1]};
    const double total = 2 * (areas[0] + areas[1] + areas[2]);
    for (int k = 0; k < count; ++k) {
      double u = uniform(0.0, total);
      int axis = 0;
      while (axis < 2 && u >= 2 * areas[axis]) u -= 2 * areas[axis++];
      const bool upper = u >= areas[axis];
      Vec3 q;
      for (int d = 0; d < 3; ++d) q[d] = uniform(b.min[d], b.max[d]);
      q[axis] = upper ? b.max[axis] : b.min[axis];
      for (double& v : q) v += noise(rng_);
      pts.push_back(q);
    }
    return pts;
  }

  GeneratedScene finish() {
    GeneratedScene g;
    std::vector<Instance> instances;
    std::vector<Aabb> boxes;
    std::vector<int> kinds;
    for (int i = 0; i < static_cast<int>(placed_.size()); ++i) {
      instances.push_back(Instance::from_points(i, sample_surface(placed_[i])));
      boxes.push_back(instances.back().aabb);
      kinds.push_back(placed_[i].kind);
      g.clone_of.push_back(placed_[i].clone_of);
      g.placed_on.push_back(placed_[i].placed_on);
    }
    std::vector<int> fine = apply_context_labels(boxes, kinds, config_.rules);
    PredicateTensor preds = apply_predicate_rules(boxes, fine, config_.rules);
    g.sample = make_sample(std::move(instances), std::move(fine), std::move(preds),
                           synthetic_taxonomy());
    return g;
  }

  Rng rng_;
  const GeneratorConfig& config_;
  std::vector<Placed> placed_;
};

}  // namespace

void GeneratorConfig::validate() const {
  if (min_entities < 1 || max_entities < min_entities) {
    throw ConfigError("generator: entity range must satisfy 1 <= min <= max");
  }
  if (!(room_x > 0) || !(room_y > 0)) throw ConfigError("generator: room extent must be positive");
  if (!(noise_sigma >= 0)) throw ConfigError("generator: noise_sigma must be >= 0");
  if (min_points < 1 || max_points < min_points) {
    throw ConfigError("generator: point range must satisfy 1 <= min <= max");
  }
  if (!(size_jitter >= 0 && size_jitter < 1)) throw ConfigError("generator: size_jitter in [0,1)");
  for (double p : {clone_probability, support_probability, flush_probability,
                   seat_near_table_probability}) {
    if (!(p >= 0 && p <= 1)) throw ConfigError("generator: probabilities must lie in [0,1]");
  }
  const PredicateRules& r = rules;
  if (!(r.near_distance >= 0 && r.direction_ratio >= 0 && r.contact_tolerance >= 0 &&
        r.same_extent_tolerance >= 0 && r.seat_distance >= 0)) {
    throw ConfigError("generator: rule thresholds must be non-negative");
  }
}

nlohmann::json to_json(const GeneratorConfig& c) {
  return {{"min_entities", c.min_entities},
          {"max_entities", c.max_entities},
          {"room_x", c.room_x},
          {"room_y", c.room_y},
          {"noise_sigma", c.noise_sigma},
          {"min_points", c.min_points},
          {"max_points", c.max_points},
          {"size_jitter", c.size_jitter},
          {"clone_probability", c.clone_probability},
          {"support_probability", c.support_probability},
          {"flush_probability", c.flush_probability},
          {"seat_near_table_probability", c.seat_near_table_probability},
          {"rules",
           {{"near_distance", c.rules.near_distance},
            {"direction_ratio", c.rules.direction_ratio},
            {"contact_tolerance", c.rules.contact_tolerance},
            {"same_extent_tolerance", c.rules.same_extent_tolerance},
            {"seat_distance", c.rules.seat_distance},
            {"single_label", c.rules.single_label}}}};
}

using detail::read_field;
using detail::reject_unknown;

GeneratorConfig generator_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("generator config must be a JSON object");
  GeneratorConfig c;
  nlohmann::json known = to_json(c);
  known["version"] = 1;
  reject_unknown(j, known);
  read_field(j, "min_entities", c.min_entities);
  read_field(j, "max_entities", c.max_entities);
  read_field(j, "room_x", c.room_x);
  read_field(j, "room_y", c.room_y);
  read_field(j, "noise_sigma", c.noise_sigma);
  read_field(j, "min_points", c.min_points);
  read_field(j, "max_points", c.max_points);
  read_field(j, "size_jitter", c.size_jitter);
  read_field(j, "clone_probability", c.clone_probability);
  read_field(j, "support_probability", c.support_probability);
  read_field(j, "flush_probability", c.flush_probability);
  read_field(j, "seat_near_table_probability", c.seat_near_table_probability);
  if (j.contains("rules")) {
    const auto& r = j.at("rules");
    if (!r.is_object()) throw ConfigError("config: 'rules' must be an object");
    reject_unknown(r, known["rules"]);
    read_field(r, "near_distance", c.rules.near_distance);
    read_field(r, "direction_ratio", c.rules.direction_ratio);
    read_field(r, "contact_tolerance", c.rules.contact_tolerance);
    read_field(r, "same_extent_tolerance", c.rules.same_extent_tolerance);
    read_field(r, "seat_distance", c.rules.seat_distance);
    read_field(r, "single_label", c.rules.single_label);
  }
  c.validate();
  return c;
}

const Taxonomy& synthetic_taxonomy() {
  static const Taxonomy t = build_taxonomy();
  return t;
}

std::vector<int> apply_context_labels(const std::vector<Aabb>& boxes,
                                      const std::vector<int>& template_fine,
                                      const PredicateRules& rules) {
  std::vector<int> fine = template_fine;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (template_fine[i] != kTable && template_fine[i] != kDiningTable) continue;
    int seats = 0;
    for (std::size_t j = 0; j < boxes.size(); ++j) {
      if (j != i && is_seat(template_fine[j]) &&
          horizontal_gap(boxes[i], boxes[j]) <= rules.seat_distance) {
        ++seats;
      }
    }
    fine[i] = seats >= 2 ? kDiningTable : kTable;
  }
  return fine;
}

PredicateTensor apply_predicate_rules(const std::vector<Aabb>& boxes, const std::vector<int>& fine,
                                      const PredicateRules& rules) {
  const int n = static_cast<int>(boxes.size());
  PredicateTensor t(n, 9);
  for (int i = 0; i < n; ++i) {
    const Aabb& a = boxes[i];
    const Vec3 ca = a.center(), ea = a.extent();
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Aabb& b = boxes[j];
      const Vec3 cb = b.center(), eb = b.extent();

      const double tol = rules.contact_tolerance;
      const bool on_top = std::abs(a.min[2] - b.max[2]) <= tol && ca[0] >= b.min[0] &&
                          ca[0] <= b.max[0] && ca[1] >= b.min[1] && ca[1] <= b.max[1];

      const double gx = signed_gap(a.min[0], a.max[0], b.min[0], b.max[0]);
      const double gy = signed_gap(a.min[1], a.max[1], b.min[1], b.max[1]);
      const double gz = signed_gap(a.min[2], a.max[2], b.min[2], b.max[2]);
      const bool side_contact =
          gz < -tol && ((std::abs(gx) <= tol && gy < -tol) || (std::abs(gy) <= tol && gx < -tol));
      const bool attached = side_contact && a.volume() < b.volume();

      bool same = fine[i] == fine[j];
      for (int d = 0; d < 3; ++d) same = same && std::abs(ea[d] - eb[d]) <= rules.same_extent_tolerance;

      // Direction candidates as (score, predicate); score = |delta| / mean extent.
      std::vector<std::pair<double, int>> directions;
      if (horizontal_gap(a, b) <= rules.near_distance) {
        const double delta[3] = {cb[0] - ca[0], cb[1] - ca[1], ca[2] - cb[2]};
        const int positive[3] = {kLeft, kFront, kHigherThan};
        const int negative[3] = {kRight, kBehind, kLowerThan};
        for (int d = 0; d < 3; ++d) {
          const double mean_extent = (ea[d] + eb[d]) / 2;
          if (std::abs(delta[d]) > rules.direction_ratio * mean_extent) {
            const double score = mean_extent > 0 ? std::abs(delta[d]) / mean_extent
                                                 : std::numeric_limits<double>::infinity();
            directions.push_back({score, delta[d] > 0 ? positive[d] : negative[d]});
          }
        }
      }

      if (!rules.single_label) {
        for (const auto& [score, p] : directions) t.set(i, j, p);
        if (on_top) t.set(i, j, kStandingOn);
        if (attached) t.set(i, j, kAttachedTo);
        if (same) t.set(i, j, kSameAs);
      } else if (on_top) {
        t.set(i, j, kStandingOn);
      } else if (attached) {
        t.set(i, j, kAttachedTo);
      } else if (same) {
        t.set(i, j, kSameAs);
      } else if (!directions.empty()) {
        auto best = directions.begin();
        for (auto it = directions.begin(); it != directions.end(); ++it) {
          if (it->first > best->first) best = it;
        }
        t.set(i, j, best->second);
      }
    }
  }
  return t;
}

GeneratedScene generate_scene_detailed(std::uint64_t seed, const GeneratorConfig& config) {
  config.validate();
  return SceneBuilder(seed, config).build();
}

SceneSample generate_scene(std::uint64_t seed, const GeneratorConfig& config) {
  return generate_scene_detailed(seed, config).sample;
}

SceneSample generate_dataset_scene(std::uint64_t seed, int index, const GeneratorConfig& config) {
  return generate_scene(derive_seed(seed, {static_cast<std::uint64_t>(index)}), config);
}

std::vector<SceneSample> generate_dataset(std::uint64_t seed, int count,
                                          const GeneratorConfig& config) {
  if (count < 1) throw ConfigError("dataset size must be >= 1");
  std::vector<SceneSample> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(generate_dataset_scene(seed, i, config));
  return out;
}

}  // namespace insg::synth
