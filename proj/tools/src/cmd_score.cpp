#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "common.hpp"
#include "tog/checkpoint.hpp"
#include "tog/errors.hpp"
#include "tog/train.hpp"

namespace togcli {

namespace {

struct ScoreArgs {
  std::string checkpoint;
  std::string cloud;
  std::string grasps;
  std::string instruction;
  std::string class_desc;
  std::string task_desc;
  std::string report;
  std::uint64_t seed = 0;
};

std::vector<tog::geom::GraspPose> load_poses(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tog::IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const auto parsed = nlohmann::json::parse(buffer.str(), nullptr, false);
  if (parsed.is_discarded() || !parsed.is_array()) throw tog::InvalidInput("grasp file must be a JSON array");

  std::vector<tog::geom::GraspPose> poses;
  for (const auto& entry : parsed) {
    if (!entry.is_array() || entry.size() != 12)
      throw tog::InvalidInput("each grasp must be 12 numbers, row-major rotation then translation");
    tog::Tensor rotation({3, 3});
    tog::Tensor translation({3});
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) rotation.at(r, c) = entry[3 * r + c].get<double>();
    for (std::size_t i = 0; i < 3; ++i) translation.at(0, i) = entry[9 + i].get<double>();
    poses.emplace_back(std::move(rotation), std::move(translation));
    poses.back().validate();
  }
  if (poses.empty()) throw tog::InvalidInput("grasp file lists no poses");
  return poses;
}

void run(const ScoreArgs& args) {
  auto loaded = tog::load_checkpoint(args.checkpoint);
  const auto poses = load_poses(args.grasps);

  tog::geom::ObjectCloud cloud;
  cloud.points = tog::geom::read_pcld(args.cloud);
  cloud.instance_id = args.cloud;

  std::vector<double> scores(poses.size(), 0.0);
  for (std::size_t i = 0; i < poses.size(); ++i) {
    tog::train::ScoreRequest request{cloud, poses[i], args.instruction, args.class_desc, args.task_desc};
    scores[i] = tog::train::score_grasp(loaded.model, request, args.seed);
  }

  std::vector<std::size_t> order(poses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  nlohmann::json ranking = nlohmann::json::array();
  for (std::size_t i : order) {
    std::cout << "grasp " << i << " score " << scores[i] << "\n";
    ranking.push_back({{"index", i}, {"score", scores[i]}});
  }
  if (!args.report.empty()) {
    std::ofstream out(args.report);
    if (!out) throw tog::IoError("cannot write " + args.report);
    out << nlohmann::json{{"scores", scores}, {"ranking", ranking}}.dump(2) << "\n";
  }
}

}  // namespace

void register_score(CLI::App& app) {
  auto args = std::make_shared<ScoreArgs>();
  CLI::App* cmd = app.add_subcommand("score", "score grasp poses on one point cloud");
  cmd->add_option("--checkpoint", args->checkpoint, "checkpoint directory")->required();
  cmd->add_option("--cloud", args->cloud, "object point cloud (.pcld)")->required();
  cmd->add_option("--grasps", args->grasps, "JSON array of 12-number poses")->required();
  cmd->add_option("--instruction", args->instruction, "task instruction sentence")->required();
  cmd->add_option("--class-desc", args->class_desc, "object class description paragraph")->required();
  cmd->add_option("--task-desc", args->task_desc, "task description paragraph")->required();
  cmd->add_option("--report", args->report, "write scores as JSON here");
  cmd->add_option("--seed", args->seed, "preprocessing seed");
  cmd->callback([args] { run(*args); });
}

}  // namespace togcli
