#include <iostream>

#include "common.hpp"
#include "tog/checkpoint.hpp"
#include "tog/errors.hpp"
#include "tog/train.hpp"

namespace togcli {

namespace {

struct EvalArgs {
  std::string checkpoint;
  std::string manifest;
  std::string split;
  std::string partition = "test";
  std::string report;
  std::vector<std::string> class_swaps;
  std::vector<std::string> task_swaps;
  bool no_overlap_check = false;
  std::uint64_t seed = 0;
};

void run(const EvalArgs& args) {
  auto loaded = tog::load_checkpoint(args.checkpoint);
  const auto manifest = tog::data::load_manifest(args.manifest);

  tog::train::EvalOptions options;
  options.split_name = args.split;
  if (args.partition == "test") options.partition = tog::data::Partition::Test;
  else if (args.partition == "train") options.partition = tog::data::Partition::Train;
  else throw tog::InvalidInput("--partition must be test or train");
  options.check_overlap = !args.no_overlap_check;
  options.class_desc_swap = parse_swaps(args.class_swaps);
  options.task_desc_swap = parse_swaps(args.task_swaps);
  options.seed = args.seed;

  const auto result = tog::train::evaluate_model(loaded.model, manifest, options, &loaded.info);
  emit_report(result.report, args.report);
}

}  // namespace

void register_eval(CLI::App& app) {
  auto args = std::make_shared<EvalArgs>();
  CLI::App* cmd = app.add_subcommand("eval", "evaluate a checkpoint on a dataset split");
  cmd->add_option("--checkpoint", args->checkpoint, "checkpoint directory")->required();
  cmd->add_option("--manifest", args->manifest, "dataset manifest path")->required();
  cmd->add_option("--split", args->split, "split name (empty scores the whole manifest)");
  cmd->add_option("--partition", args->partition, "test (default) or train");
  cmd->add_option("--report", args->report, "write the JSON report here");
  cmd->add_option("--class-swap", args->class_swaps, "score with another class's descriptions, original=replacement")
      ->delimiter(',');
  cmd->add_option("--task-swap", args->task_swaps, "score with another task's descriptions, original=replacement")
      ->delimiter(',');
  cmd->add_flag("--no-overlap-check", args->no_overlap_check, "allow samples the checkpoint trained on");
  cmd->add_option("--seed", args->seed, "evaluation preprocessing seed");
  cmd->callback([args] { run(*args); });
}

}  // namespace togcli
