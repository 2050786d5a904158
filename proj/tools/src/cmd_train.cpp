#include <filesystem>
#include <fstream>
#include <iostream>

#include "common.hpp"
#include "tog/checkpoint.hpp"
#include "tog/errors.hpp"
#include "tog/train.hpp"

namespace togcli {

namespace {

struct TrainArgs {
  std::string manifest;
  std::string split = "held_out_class";
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t epochs = 0;
};

void run(const TrainArgs& args) {
  DirLock lock(args.out);
  const auto manifest = tog::data::load_manifest(args.manifest);

  tog::TrainConfig config;
  if (!args.config.empty()) config = tog::load_train_config(args.config);
  if (args.seed_set) config.seed = args.seed;
  if (args.epochs > 0) config.epochs = args.epochs;

  std::ofstream log(std::filesystem::path(args.out) / "train_log.txt");
  if (!log) throw tog::IoError("cannot open train log in " + args.out);

  auto result = tog::train::train_model(manifest, args.split, config, &log);
  std::cout << "trained " << result.steps << " steps over " << config.epochs << " epochs; final loss "
            << result.epoch_losses.back() << "\n";

  tog::save_checkpoint(args.out, result.model, result.steps, result.info);
  tog::save_train_config((std::filesystem::path(args.out) / "train_config.json").string(), config);
  std::cout << "checkpoint written to " << args.out << "\n";
}

}  // namespace

void register_train(CLI::App& app) {
  auto args = std::make_shared<TrainArgs>();
  CLI::App* cmd = app.add_subcommand("train", "train a grasp evaluator on a dataset split");
  cmd->add_option("--manifest", args->manifest, "dataset manifest path")->required();
  cmd->add_option("--split", args->split, "training split name");
  cmd->add_option("--config", args->config, "train config JSON (defaults used when absent)");
  cmd->add_option("--out", args->out, "checkpoint output directory")->required();
  cmd->add_option("--seed", args->seed, "override the config seed")->each([args](const std::string&) {
    args->seed_set = true;
  });
  cmd->add_option("--epochs", args->epochs, "override the config epoch count");
  cmd->callback([args] { run(*args); });
}

}  // namespace togcli
