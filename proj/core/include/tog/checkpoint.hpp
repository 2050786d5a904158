#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tog/model.hpp"

namespace tog {

struct TrainInfo {
  std::string split_name;
  std::string split_mode;
  std::vector<std::string> train_classes;
  std::vector<std::string> train_tasks;
  std::vector<std::string> train_instances;
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
};

// A checkpoint is a JSON manifest (parameter names and shapes, optimizer
// step, model config, training provenance) next to a flat little-endian
// float32 blob holding parameters then buffers in manifest order.
void save_checkpoint(const std::string& dir, Model& model, std::size_t optimizer_step, const TrainInfo& info);

struct LoadedCheckpoint {
  Model model;
  std::size_t optimizer_step = 0;
  TrainInfo info;
};

LoadedCheckpoint load_checkpoint(const std::string& dir);

}  // namespace tog
