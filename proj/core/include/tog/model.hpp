#pragma once

#include <string>
#include <vector>

#include "tog/config.hpp"
#include "tog/lang.hpp"
#include "tog/pointnet.hpp"
#include "tog/tge.hpp"

namespace tog {

// Everything a checkpoint round-trips: encoder and evaluator weights plus
// the configuration they were built from.
struct Model {
  ModelConfig config;
  pn::EncoderWeights encoder;
  tge::TgeWeights evaluator;
};

Model init_model(const ModelConfig& config, Rng& rng);

struct ParamEntry {
  std::string name;
  nn::Value value;
};

struct BufferEntry {
  std::string name;
  Tensor* tensor;
};

// Deterministic enumeration order; checkpoints serialize in exactly this
// order, parameters first, then buffers.
std::vector<ParamEntry> model_parameters(Model& model);
std::vector<BufferEntry> model_buffers(Model& model);

std::size_t parameter_count(Model& model);

}  // namespace tog
