#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "tog/checkpoint.hpp"
#include "tog/config.hpp"
#include "tog/datagen.hpp"
#include "tog/metrics.hpp"
#include "tog/model.hpp"

namespace tog::train {

// Hash provider by default; TOGEVAL_EMBED_ENDPOINT switches every run to the
// remote embedding service at that URL.
std::shared_ptr<lang::EmbeddingProvider> make_embedding_provider(const LangConfig& config);

struct TrainResult {
  Model model;
  std::vector<double> epoch_losses;
  std::size_t steps = 0;
  TrainInfo info;
};

// Minimizes binary cross entropy over the train partition of the named
// split. Deterministic given config.seed.
TrainResult train_model(const data::DatasetManifest& manifest, const std::string& split_name,
                        const TrainConfig& config, std::ostream* log = nullptr);

struct EvalOptions {
  std::string split_name;  // empty scores every sample in the manifest
  data::Partition partition = data::Partition::Test;
  // Refuse samples the checkpoint saw in training (by the training split's
  // held-out dimension).
  bool check_overlap = true;
  // Score with another concept's description paragraphs substituted in.
  std::map<std::string, std::string> class_desc_swap;
  std::map<std::string, std::string> task_desc_swap;
  std::uint64_t seed = 0;
};

struct EvalResult {
  metrics::ApReport report;
  std::vector<metrics::ScoredSample> samples;
};

EvalResult evaluate_model(Model& model, const data::DatasetManifest& manifest, const EvalOptions& options,
                          const TrainInfo* train_info = nullptr);

// Task-agnostic floor: each (instance, grasp) pair gets one uniform score,
// shared across tasks.
metrics::ApReport random_baseline(const data::DatasetManifest& manifest, const data::SplitDef& split,
                                  data::Partition partition, std::uint64_t seed);

struct ScoreRequest {
  geom::ObjectCloud cloud;
  geom::GraspPose pose;
  std::string instruction;
  std::string object_description;
  std::string task_description;
};

double score_grasp(Model& model, const ScoreRequest& request, std::uint64_t seed = 0);

}  // namespace tog::train
