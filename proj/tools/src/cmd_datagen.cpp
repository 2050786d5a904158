#include <cstdlib>
#include <iostream>
#include <memory>

#include "common.hpp"
#include "tog/datagen.hpp"
#include "tog/errors.hpp"

namespace togcli {

namespace {

struct DatagenArgs {
  tog::data::DatagenConfig config;
  std::string out;
  bool online = false;
  std::uint64_t stub_seed = 7;
  int llm_timeout = 60;
  int llm_retries = 3;
};

void run(const DatagenArgs& args) {
  DirLock lock(args.out);
  const tog::data::SynthLexicon lexicon = tog::data::builtin_lexicon();

  std::unique_ptr<tog::data::LlmClient> client;
  if (args.online) {
    const char* endpoint = std::getenv("TOGEVAL_LLM_ENDPOINT");
    if (!endpoint || !*endpoint)
      throw tog::InvalidInput("--online needs TOGEVAL_LLM_ENDPOINT in the environment");
    client = std::make_unique<tog::data::HttpLlmClient>(endpoint, args.llm_timeout, args.llm_retries);
  } else {
    client = std::make_unique<tog::data::StubLlmClient>(lexicon, args.stub_seed);
  }

  const auto manifest = tog::data::generate_dataset(args.config, lexicon, *client, args.out);
  std::size_t grasps = 0;
  for (const auto& instance : manifest.instances) grasps += instance.grasps.size();
  std::cout << "wrote " << manifest.instances.size() << " instances (" << grasps << " grasps, "
            << manifest.classes.size() << " classes, " << manifest.tasks.size() << " tasks) to " << args.out
            << "\n";
  for (const auto& [name, split] : manifest.splits) {
    std::cout << "split " << name << ":";
    for (const auto& held : split.held_out) std::cout << " " << held;
    std::cout << "\n";
  }
}

}  // namespace

void register_datagen(CLI::App& app) {
  auto args = std::make_shared<DatagenArgs>();
  CLI::App* cmd = app.add_subcommand("datagen", "generate a synthetic labeled grasp dataset");
  cmd->add_option("--out", args->out, "output directory")->required();
  cmd->add_option("--seed", args->config.seed, "dataset seed");
  cmd->add_option("--classes", args->config.classes, "object classes (default: all built in)")->delimiter(',');
  cmd->add_option("--tasks", args->config.tasks, "tasks (default: all built in)")->delimiter(',');
  cmd->add_option("--instances-per-class", args->config.instances_per_class, "object instances per class");
  cmd->add_option("--grasps", args->config.grasps_per_instance, "grasp candidates per instance");
  cmd->add_option("--points", args->config.points_per_cloud, "surface points per cloud");
  cmd->add_option("--prompts-per-set", args->config.prompts_per_set, "prompts taken from each prompt set");
  cmd->add_option("--answers-class", args->config.answers_per_class_prompt, "answers per class prompt");
  cmd->add_option("--answers-task", args->config.answers_per_task_prompt, "answers per task prompt");
  cmd->add_option("--paragraph-limit", args->config.paragraph_limit, "description paragraphs kept per concept");
  cmd->add_option("--holdout-fraction", args->config.holdout_fraction, "held-out fraction for default splits");
  cmd->add_flag("--online", args->online, "query the completion service named by TOGEVAL_LLM_ENDPOINT");
  cmd->add_option("--stub-seed", args->stub_seed, "seed for the offline completion stub");
  cmd->add_option("--llm-timeout", args->llm_timeout, "completion request timeout, seconds");
  cmd->add_option("--llm-retries", args->llm_retries, "completion request retries");
  cmd->callback([args] { run(*args); });
}

}  // namespace togcli
