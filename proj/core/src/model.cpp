#include "tog/model.hpp"

namespace tog {

namespace {

void add_linear(std::vector<ParamEntry>& out, const std::string& name, const nn::Linear& linear) {
  out.push_back({name + ".w", linear.w});
  out.push_back({name + ".b", linear.b});
}

void add_decoder_layer(std::vector<ParamEntry>& out, const std::string& name,
                       const tge::DecoderLayerWeights& layer) {
  add_linear(out, name + ".q_proj", layer.q_proj);
  add_linear(out, name + ".k_proj", layer.k_proj);
  add_linear(out, name + ".v_proj", layer.v_proj);
  add_linear(out, name + ".out_proj", layer.out_proj);
  out.push_back({name + ".ln_attn.gain", layer.ln_attn.gain});
  out.push_back({name + ".ln_attn.bias", layer.ln_attn.bias});
  out.push_back({name + ".ln_ffn.gain", layer.ln_ffn.gain});
  out.push_back({name + ".ln_ffn.bias", layer.ln_ffn.bias});
  add_linear(out, name + ".ffn_1", layer.ffn_1);
  add_linear(out, name + ".ffn_2", layer.ffn_2);
}

}  // namespace

Model init_model(const ModelConfig& config, Rng& rng) {
  config.validate();
  Model model;
  model.config = config;
  model.encoder = pn::init_encoder(config.encoder, rng);
  model.evaluator = tge::init_tge(config.evaluator, rng);
  return model;
}

std::vector<ParamEntry> model_parameters(Model& model) {
  std::vector<ParamEntry> out;
  for (std::size_t layer = 0; layer < 3; ++layer) {
    for (std::size_t i = 0; i < model.encoder.layers[layer].mlp.size(); ++i) {
      add_linear(out, "encoder.sa" + std::to_string(layer) + ".mlp" + std::to_string(i),
                 model.encoder.layers[layer].mlp[i]);
    }
  }
  add_linear(out, "evaluator.lang_proj", model.evaluator.lang_proj);
  add_decoder_layer(out, "evaluator.object_layer", model.evaluator.object_layer);
  add_decoder_layer(out, "evaluator.task_layer", model.evaluator.task_layer);
  add_linear(out, "evaluator.shape_proj", model.evaluator.shape_proj);
  for (std::size_t i = 0; i < model.evaluator.head.size(); ++i) {
    add_linear(out, "evaluator.head.fc" + std::to_string(i), model.evaluator.head[i]);
  }
  for (std::size_t i = 0; i < model.evaluator.head_norm.size(); ++i) {
    const std::string name = "evaluator.head.bn" + std::to_string(i);
    out.push_back({name + ".gain", model.evaluator.head_norm[i].gain});
    out.push_back({name + ".bias", model.evaluator.head_norm[i].bias});
  }
  return out;
}

std::vector<BufferEntry> model_buffers(Model& model) {
  std::vector<BufferEntry> out;
  for (std::size_t i = 0; i < model.evaluator.head_norm.size(); ++i) {
    const std::string name = "evaluator.head.bn" + std::to_string(i);
    out.push_back({name + ".running_mean", &model.evaluator.head_norm[i].running_mean});
    out.push_back({name + ".running_var", &model.evaluator.head_norm[i].running_var});
  }
  return out;
}

std::size_t parameter_count(Model& model) {
  std::size_t n = 0;
  for (const auto& entry : model_parameters(model)) n += entry.value.size();
  return n;
}

}  // namespace tog
