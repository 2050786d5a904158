#include <iostream>

#include "common.hpp"
#include "tog/errors.hpp"
#include "tog/train.hpp"

namespace togcli {

namespace {

struct BaselineArgs {
  std::string manifest;
  std::string split = "held_out_class";
  std::string partition = "test";
  std::string report;
  std::uint64_t seed = 0;
};

void run(const BaselineArgs& args) {
  const auto manifest = tog::data::load_manifest(args.manifest);
  const auto it = manifest.splits.find(args.split);
  if (it == manifest.splits.end()) throw tog::InvalidInput("manifest has no split named '" + args.split + "'");
  tog::data::Partition partition;
  if (args.partition == "test") partition = tog::data::Partition::Test;
  else if (args.partition == "train") partition = tog::data::Partition::Train;
  else throw tog::InvalidInput("--partition must be test or train");

  const auto report = tog::train::random_baseline(manifest, it->second, partition, args.seed);
  emit_report(report, args.report);
}

}  // namespace

void register_baseline(CLI::App& app) {
  auto args = std::make_shared<BaselineArgs>();
  CLI::App* cmd = app.add_subcommand("baseline", "task-agnostic random-score floor for a split");
  cmd->add_option("--manifest", args->manifest, "dataset manifest path")->required();
  cmd->add_option("--split", args->split, "split name");
  cmd->add_option("--partition", args->partition, "test (default) or train");
  cmd->add_option("--seed", args->seed, "score seed");
  cmd->add_option("--report", args->report, "write the JSON report here");
  cmd->callback([args] { run(*args); });
}

}  // namespace togcli
