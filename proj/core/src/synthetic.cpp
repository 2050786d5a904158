#include "tog/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <set>

#include "tog/errors.hpp"

namespace tog::synth {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kStandoff = 0.04;

using Vec3 = std::array<double, 3>;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  if (n < 1e-12) throw NumericError("cannot normalize a zero vector");
  return scale(a, 1.0 / n);
}

// Straight tube of radius r around the segment from a to b.
struct Bar {
  Vec3 a;
  Vec3 b;
  double radius;
};

Vec3 sample_bar(const Bar& bar, Rng& rng) {
  const Vec3 axis = normalized(sub(bar.b, bar.a));
  const Vec3 up = std::abs(axis[2]) < 0.9 ? Vec3{0, 0, 1} : Vec3{0, 1, 0};
  const Vec3 u = normalized(cross(up, axis));
  const Vec3 v = cross(axis, u);
  const double t = rng.uniform();
  const double phi = rng.uniform(0.0, 2.0 * kPi);
  Vec3 p = add(bar.a, scale(sub(bar.b, bar.a), t));
  p = add(p, scale(u, bar.radius * std::cos(phi)));
  return add(p, scale(v, bar.radius * std::sin(phi)));
}

struct ClassShape {
  enum class HeadKind { CylinderShell, Disc, Hemisphere, ShallowBowl, TaperedShell, SquashedSphere };
  HeadKind head;
  double head_r0 = 0.0;  // base radius or first semi-axis
  double head_r1 = 0.0;  // top radius, thickness, or z semi-axis
  double head_h = 0.0;
  Bar handle;
};

ClassShape class_shape(const std::string& class_id, double s, double hs) {
  using K = ClassShape::HeadKind;
  if (class_id == "mug") {
    const double r = 0.040 * s, h = 0.100 * s;
    return {K::CylinderShell, r, r, h, {{r, 0, 0.55 * h}, {r + 0.045 * hs, 0, 0.55 * h}, 0.006}};
  }
  if (class_id == "cup") {
    const double r = 0.034 * s, h = 0.070 * s;
    return {K::CylinderShell, r, r, h, {{r, 0, 0.5 * h}, {r + 0.034 * hs, 0, 0.5 * h}, 0.005}};
  }
  if (class_id == "pot") {
    const double r = 0.090 * s, h = 0.070 * s;
    return {K::CylinderShell, r, r, h, {{r, 0, 0.85 * h}, {r + 0.050 * hs, 0, 0.85 * h}, 0.007}};
  }
  if (class_id == "pan") {
    const double r = 0.100 * s;
    return {K::Disc, r, 0.012 * s, 0.0, {{r, 0, 0}, {r + 0.140 * hs, 0, 0.012 * s}, 0.009}};
  }
  if (class_id == "ladle") {
    const double r = 0.045 * s;
    return {K::Hemisphere, r, r, 0.0, {{0.8 * r, 0, 0}, {0.8 * r + 0.16 * hs, 0, 0.12 * hs}, 0.005}};
  }
  if (class_id == "spoon") {
    return {K::ShallowBowl, 0.030 * s, 0.012 * s, 0.045 * s,
            {{0.030 * s, 0, 0}, {0.030 * s + 0.130 * hs, 0, 0.02 * hs}, 0.005}};
  }
  if (class_id == "pitcher") {
    const double r = 0.050 * s, h = 0.140 * s;
    return {K::TaperedShell, r, 0.034 * s, h, {{r + 0.018 * s, 0, 0.30 * h}, {r + 0.018 * s, 0, 0.80 * h}, 0.006}};
  }
  if (class_id == "teapot") {
    const double r = 0.070 * s;
    return {K::SquashedSphere, r, 0.045 * s, 0.0, {{r, 0, -0.01 * s}, {r + 0.020 * hs, 0, 0.05 * hs}, 0.006}};
  }
  throw InvalidInput("no shape defined for class: " + class_id);
}

Vec3 sample_head(const ClassShape& shape, Rng& rng) {
  using K = ClassShape::HeadKind;
  switch (shape.head) {
    case K::CylinderShell: {
      if (rng.uniform() < 0.15) {  // bottom disc
        const double rad = shape.head_r0 * std::sqrt(rng.uniform());
        const double theta = rng.uniform(0.0, 2.0 * kPi);
        return {rad * std::cos(theta), rad * std::sin(theta), 0.0};
      }
      const double theta = rng.uniform(0.0, 2.0 * kPi);
      const double z = rng.uniform(0.0, shape.head_h);
      return {shape.head_r0 * std::cos(theta), shape.head_r0 * std::sin(theta), z};
    }
    case K::Disc: {
      const double rad = shape.head_r0 * std::sqrt(rng.uniform());
      const double theta = rng.uniform(0.0, 2.0 * kPi);
      const double z = rng.bernoulli(0.5) ? shape.head_r1 : 0.0;
      return {rad * std::cos(theta), rad * std::sin(theta), z};
    }
    case K::Hemisphere: {
      Vec3 dir{rng.normal(), rng.normal(), rng.normal()};
      dir = normalized(dir);
      dir[2] = -std::abs(dir[2]);
      return scale(dir, shape.head_r0);
    }
    case K::ShallowBowl: {
      Vec3 dir{rng.normal(), rng.normal(), rng.normal()};
      dir = normalized(dir);
      dir[2] = -std::abs(dir[2]);
      return {dir[0] * shape.head_r0, dir[1] * shape.head_h, dir[2] * shape.head_r1};
    }
    case K::TaperedShell: {
      if (rng.uniform() < 0.15) {
        const double rad = shape.head_r0 * std::sqrt(rng.uniform());
        const double theta = rng.uniform(0.0, 2.0 * kPi);
        return {rad * std::cos(theta), rad * std::sin(theta), 0.0};
      }
      const double z = rng.uniform(0.0, shape.head_h);
      const double r = shape.head_r0 + (shape.head_r1 - shape.head_r0) * (z / shape.head_h);
      const double theta = rng.uniform(0.0, 2.0 * kPi);
      return {r * std::cos(theta), r * std::sin(theta), z};
    }
    case K::SquashedSphere: {
      Vec3 dir{rng.normal(), rng.normal(), rng.normal()};
      dir = normalized(dir);
      return {dir[0] * shape.head_r0, dir[1] * shape.head_r0, dir[2] * shape.head_r1};
    }
  }
  throw NumericError("unreachable head kind");
}

geom::GraspPose grasp_at(const Vec3& surface_point, const Vec3& part_centroid) {
  Vec3 inward = sub(part_centroid, surface_point);
  if (norm(inward) < 1e-9) inward = {0, 0, -1};
  const Vec3 d = normalized(inward);
  const Vec3 up = std::abs(d[2]) < 0.9 ? Vec3{0, 0, 1} : Vec3{0, 1, 0};
  const Vec3 x = normalized(cross(up, d));
  const Vec3 y = cross(d, x);

  Tensor rotation({3, 3});
  for (std::size_t r = 0; r < 3; ++r) {
    rotation.at(r, 0) = x[r];
    rotation.at(r, 1) = y[r];
    rotation.at(r, 2) = d[r];
  }
  Tensor translation({3});
  const Vec3 t = sub(surface_point, scale(d, kStandoff));
  for (std::size_t r = 0; r < 3; ++r) translation.at(0, r) = t[r];
  geom::GraspPose pose(std::move(rotation), std::move(translation));
  pose.validate();
  return pose;
}

}  // namespace

InstanceGeometry make_instance(const std::string& class_id, const std::vector<std::string>& tasks,
                               const data::SynthLexicon& lexicon, std::size_t points, std::size_t grasp_count,
                               Rng& rng) {
  if (points < 2) throw InvalidInput("need at least 2 points per cloud");
  if (grasp_count == 0) throw InvalidInput("need at least 1 grasp");
  if (lexicon.parts.size() != 2) throw InvalidInput("lexicon must define exactly 2 parts");
  const auto rules_it = lexicon.label_rules.find(class_id);
  if (rules_it == lexicon.label_rules.end()) throw InvalidInput("no label rules for class: " + class_id);

  const double s = rng.uniform(0.9, 1.1);
  const double hs = rng.uniform(0.9, 1.1);
  const ClassShape shape = class_shape(class_id, s, hs);

  const std::size_t handle_points = std::max<std::size_t>(1, points * 3 / 10);
  const std::size_t head_points = points - handle_points;

  InstanceGeometry out;
  out.head_points = head_points;
  out.cloud = Tensor({points, 3});
  Vec3 head_centroid{0, 0, 0};
  Vec3 handle_centroid{0, 0, 0};
  for (std::size_t i = 0; i < head_points; ++i) {
    const Vec3 p = sample_head(shape, rng);
    for (std::size_t c = 0; c < 3; ++c) out.cloud.at(i, c) = p[c];
    head_centroid = add(head_centroid, p);
  }
  for (std::size_t i = 0; i < handle_points; ++i) {
    const Vec3 p = sample_bar(shape.handle, rng);
    for (std::size_t c = 0; c < 3; ++c) out.cloud.at(head_points + i, c) = p[c];
    handle_centroid = add(handle_centroid, p);
  }
  head_centroid = scale(head_centroid, 1.0 / static_cast<double>(head_points));
  handle_centroid = scale(handle_centroid, 1.0 / static_cast<double>(handle_points));

  for (std::size_t g = 0; g < grasp_count; ++g) {
    const std::string& part = lexicon.parts[g % 2];
    const bool on_head = part == lexicon.parts[0];
    const std::size_t row = on_head ? rng.uniform_index(head_points)
                                    : head_points + rng.uniform_index(handle_points);
    const Vec3 point{out.cloud.at(row, 0), out.cloud.at(row, 1), out.cloud.at(row, 2)};

    data::GraspEntry grasp;
    grasp.pose = grasp_at(point, on_head ? head_centroid : handle_centroid);
    grasp.part = part;
    const auto& part_rules = rules_it->second.at(part);
    for (const auto& task : tasks) {
      const auto label_it = part_rules.find(task);
      if (label_it == part_rules.end()) throw InvalidInput("no label rule for task: " + task);
      grasp.labels[task] = label_it->second;
    }
    out.grasps.push_back(std::move(grasp));
  }
  return out;
}

}  // namespace tog::synth

namespace tog::data {

namespace {

std::vector<std::string> resolve_names(const std::vector<std::string>& requested,
                                       const std::vector<std::string>& available, const char* what) {
  if (requested.empty()) return available;
  std::set<std::string> pool(available.begin(), available.end());
  std::set<std::string> seen;
  for (const auto& name : requested) {
    if (!pool.count(name)) throw InvalidInput(std::string(what) + " not in lexicon: " + name);
    if (!seen.insert(name).second) throw InvalidInput(std::string(what) + " repeated: " + name);
  }
  return requested;
}

// One non-first member per relatedness group, so every held-out class keeps
// a trained sibling that its similarity descriptions can point to.
std::vector<std::string> sibling_preserving_holdout(const std::vector<std::string>& classes,
                                                    const SynthLexicon& lexicon, std::size_t k) {
  std::map<std::string, std::vector<std::string>> by_group;
  for (const auto& cls : classes) by_group[lexicon.classes.at(cls).group].push_back(cls);
  std::vector<std::string> held;
  for (std::size_t round = 1; held.size() < k; ++round) {
    bool any = false;
    for (const auto& [group, members] : by_group) {
      if (members.size() > round) {
        any = true;
        held.push_back(members[round]);
        if (held.size() == k) break;
      }
    }
    if (!any) break;
  }
  return held;
}

}  // namespace

DatasetManifest generate_dataset(const DatagenConfig& config, const SynthLexicon& lexicon, LlmClient& client,
                                 const std::string& out_dir) {
  if (config.instances_per_class == 0) throw InvalidInput("instances_per_class must be positive");
  if (config.grasps_per_instance == 0) throw InvalidInput("grasps_per_instance must be positive");
  const std::vector<std::string> classes = resolve_names(config.classes, lexicon.class_names(), "class");
  const std::vector<std::string> tasks = resolve_names(config.tasks, lexicon.task_names(), "task");

  std::filesystem::create_directories(std::filesystem::path(out_dir) / "clouds");

  DatasetManifest manifest;
  manifest.seed = config.seed;
  manifest.classes = classes;
  manifest.tasks = tasks;
  manifest.stopwords = lexicon.stopwords;
  for (const auto& cls : classes) manifest.concept_group[cls] = lexicon.classes.at(cls).group;
  for (const auto& task : tasks) manifest.concept_group[task] = lexicon.tasks.at(task).group;
  for (const auto& cls : classes)
    for (const auto& part : lexicon.parts)
      for (const auto& task : tasks)
        manifest.label_rules[cls][part][task] = lexicon.label_rules.at(cls).at(part).at(task);

  for (const auto& cls : classes) {
    const auto records = generate_descriptions(client, cls, ConceptKind::ObjectClass, config.prompts_per_set,
                                               config.answers_per_class_prompt);
    const auto paragraphs =
        assemble_paragraphs(records, config.paragraph_limit, mix_seed(config.seed, stable_hash("para:" + cls)));
    for (const auto& paragraph : paragraphs) manifest.class_paragraphs[cls].push_back(paragraph.text);
  }
  for (const auto& task : tasks) {
    const auto records = generate_descriptions(client, task, ConceptKind::Task, config.prompts_per_set,
                                               config.answers_per_task_prompt);
    const auto paragraphs =
        assemble_paragraphs(records, config.paragraph_limit, mix_seed(config.seed, stable_hash("para:" + task)));
    for (const auto& paragraph : paragraphs) manifest.task_paragraphs[task].push_back(paragraph.text);
  }
  manifest.templates = builtin_templates();

  for (const auto& cls : classes) {
    for (std::size_t i = 0; i < config.instances_per_class; ++i) {
      const std::string id = cls + "_" + std::to_string(i / 10) + std::to_string(i % 10);
      Rng instance_rng(mix_seed(config.seed, stable_hash("inst:" + id)));
      auto geometry = synth::make_instance(cls, tasks, lexicon, config.points_per_cloud,
                                           config.grasps_per_instance, instance_rng);
      const std::string cloud_file = "clouds/" + id + ".pcld";
      geom::write_pcld((std::filesystem::path(out_dir) / cloud_file).string(), geometry.cloud);
      InstanceEntry instance;
      instance.instance_id = id;
      instance.class_id = cls;
      instance.cloud_file = cloud_file;
      instance.grasps = std::move(geometry.grasps);
      manifest.instances.push_back(std::move(instance));
    }
  }

  if (classes.size() >= 2) {
    std::size_t k = static_cast<std::size_t>(config.holdout_fraction * static_cast<double>(classes.size()) + 0.5);
    k = std::clamp<std::size_t>(k, 1, classes.size() - 1);
    auto held = sibling_preserving_holdout(classes, lexicon, k);
    manifest.splits["held_out_class"] = make_split(manifest, "held_out_class", config.holdout_fraction,
                                                   mix_seed(config.seed, stable_hash("split:class")), held);
  }
  if (tasks.size() >= 2)
    manifest.splits["held_out_task"] = make_split(manifest, "held_out_task", config.holdout_fraction,
                                                  mix_seed(config.seed, stable_hash("split:task")));
  if (manifest.instances.size() >= 2)
    manifest.splits["held_out_instance"] = make_split(manifest, "held_out_instance", config.holdout_fraction,
                                                      mix_seed(config.seed, stable_hash("split:instance")));

  manifest.root_dir = out_dir;
  save_manifest(manifest, (std::filesystem::path(out_dir) / "manifest.json").string());
  return manifest;
}

}  // namespace tog::data
