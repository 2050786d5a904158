#pragma once

#include <cstdint>
#include <string>

#include "tog/geometry.hpp"
#include "tog/optim.hpp"
#include "tog/pointnet.hpp"
#include "tog/tge.hpp"

namespace tog {

struct LangConfig {
  std::size_t provider_dim = 768;
  std::uint64_t provider_seed = 0;
  std::size_t max_instruction_tokens = 32;
  std::size_t max_object_desc_tokens = 256;
  std::size_t max_task_desc_tokens = 256;
};

struct ModelConfig {
  pn::EncoderConfig encoder;
  tge::TgeConfig evaluator;
  LangConfig lang;
  // Object points fed to the encoder after preprocessing (gripper rows are
  // appended on top of these).
  std::size_t input_points = 4096;

  void validate() const;
};

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t epochs = 50;
  nn::LrSchedule schedule;
  double weight_decay = 1e-4;
  std::uint64_t seed = 0;
  geom::PreprocessConfig preprocess;
  ModelConfig model;

  void validate() const;
};

std::string to_json(const ModelConfig& config);
std::string to_json(const TrainConfig& config);
ModelConfig model_config_from_json(const std::string& text);
TrainConfig train_config_from_json(const std::string& text);

TrainConfig load_train_config(const std::string& path);
void save_train_config(const std::string& path, const TrainConfig& config);

}  // namespace tog
