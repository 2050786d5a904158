#include "tog/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tog/errors.hpp"

namespace tog {

namespace {

using nlohmann::json;

json encoder_to_json(const pn::EncoderConfig& config) {
  json layers = json::array();
  for (const auto& layer : config.layers) {
    layers.push_back({{"sampled_points", layer.sampled_points},
                      {"ball_radius", std::isinf(layer.ball_radius) ? -1.0 : layer.ball_radius},
                      {"max_group_size", layer.max_group_size},
                      {"mlp_widths", layer.mlp_widths}});
  }
  return {{"layers", layers}, {"canonical_fps", config.fps_start == pn::FpsStart::Canonical}};
}

void encoder_from_json(const json& j, pn::EncoderConfig& config) {
  const auto& layers = j.at("layers");
  if (layers.size() != 3) throw InvalidInput("config: encoder needs exactly 3 layers");
  for (std::size_t i = 0; i < 3; ++i) {
    auto& layer = config.layers[i];
    layer.sampled_points = layers[i].at("sampled_points").get<std::size_t>();
    const double radius = layers[i].at("ball_radius").get<double>();
    layer.ball_radius = radius < 0.0 ? std::numeric_limits<double>::infinity() : radius;
    layer.max_group_size = layers[i].at("max_group_size").get<std::size_t>();
    layer.mlp_widths = layers[i].at("mlp_widths").get<std::vector<std::size_t>>();
  }
  config.fps_start = j.value("canonical_fps", false) ? pn::FpsStart::Canonical : pn::FpsStart::FirstIndex;
}

json evaluator_to_json(const tge::TgeConfig& config) {
  return {{"embed_dim", config.embed_dim},
          {"model_dim", config.model_dim},
          {"heads", config.heads},
          {"ffn_hidden", config.ffn_hidden},
          {"shape_dim", config.shape_dim},
          {"shape_proj_dim", config.shape_proj_dim},
          {"mlp_hidden", config.mlp_hidden},
          {"dropout", config.dropout},
          {"scale_by_model_dim", config.scale_by_model_dim},
          {"use_out_proj", config.use_out_proj}};
}

void evaluator_from_json(const json& j, tge::TgeConfig& config) {
  config.embed_dim = j.at("embed_dim").get<std::size_t>();
  config.model_dim = j.at("model_dim").get<std::size_t>();
  config.heads = j.at("heads").get<std::size_t>();
  config.ffn_hidden = j.at("ffn_hidden").get<std::size_t>();
  config.shape_dim = j.at("shape_dim").get<std::size_t>();
  config.shape_proj_dim = j.at("shape_proj_dim").get<std::size_t>();
  config.mlp_hidden = j.at("mlp_hidden").get<std::vector<std::size_t>>();
  config.dropout = j.at("dropout").get<double>();
  config.scale_by_model_dim = j.value("scale_by_model_dim", true);
  config.use_out_proj = j.value("use_out_proj", true);
}

json lang_to_json(const LangConfig& config) {
  return {{"provider_dim", config.provider_dim},
          {"provider_seed", config.provider_seed},
          {"max_instruction_tokens", config.max_instruction_tokens},
          {"max_object_desc_tokens", config.max_object_desc_tokens},
          {"max_task_desc_tokens", config.max_task_desc_tokens}};
}

void lang_from_json(const json& j, LangConfig& config) {
  config.provider_dim = j.at("provider_dim").get<std::size_t>();
  config.provider_seed = j.at("provider_seed").get<std::uint64_t>();
  config.max_instruction_tokens = j.at("max_instruction_tokens").get<std::size_t>();
  config.max_object_desc_tokens = j.at("max_object_desc_tokens").get<std::size_t>();
  config.max_task_desc_tokens = j.at("max_task_desc_tokens").get<std::size_t>();
}

json model_to_json_obj(const ModelConfig& config) {
  return {{"encoder", encoder_to_json(config.encoder)},
          {"evaluator", evaluator_to_json(config.evaluator)},
          {"lang", lang_to_json(config.lang)},
          {"input_points", config.input_points}};
}

ModelConfig model_from_json_obj(const json& j) {
  ModelConfig config;
  encoder_from_json(j.at("encoder"), config.encoder);
  evaluator_from_json(j.at("evaluator"), config.evaluator);
  lang_from_json(j.at("lang"), config.lang);
  config.input_points = j.at("input_points").get<std::size_t>();
  return config;
}

json preprocess_to_json(const geom::PreprocessConfig& config) {
  return {{"mean_center", config.mean_center},     {"scale_to_unit", config.scale_to_unit},
          {"random_rotate", config.random_rotate}, {"jitter_sigma", config.jitter_sigma},
          {"point_dropout", config.point_dropout}, {"target_points", config.target_points}};
}

void preprocess_from_json(const json& j, geom::PreprocessConfig& config) {
  config.mean_center = j.at("mean_center").get<bool>();
  config.scale_to_unit = j.at("scale_to_unit").get<bool>();
  config.random_rotate = j.at("random_rotate").get<bool>();
  config.jitter_sigma = j.at("jitter_sigma").get<double>();
  config.point_dropout = j.at("point_dropout").get<double>();
  config.target_points = j.at("target_points").get<std::size_t>();
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InvalidInput("config: malformed JSON");
  return j;
}

}  // namespace

void ModelConfig::validate() const {
  encoder.validate();
  evaluator.validate();
  if (lang.provider_dim != evaluator.embed_dim)
    throw InvalidInput("ModelConfig: provider_dim must match evaluator embed_dim");
  if (lang.max_instruction_tokens == 0 || lang.max_object_desc_tokens == 0 || lang.max_task_desc_tokens == 0)
    throw InvalidInput("ModelConfig: token budgets must be positive");
  if (input_points == 0) throw InvalidInput("ModelConfig: input_points must be positive");
}

void TrainConfig::validate() const {
  model.validate();
  if (batch_size == 0) throw InvalidInput("TrainConfig: batch_size must be positive");
  if (epochs == 0) throw InvalidInput("TrainConfig: epochs must be positive");
  if (preprocess.target_points != model.input_points)
    throw InvalidInput("TrainConfig: preprocess target_points must equal model input_points");
}

std::string to_json(const ModelConfig& config) { return model_to_json_obj(config).dump(2); }

std::string to_json(const TrainConfig& config) {
  json j{{"batch_size", config.batch_size},
         {"epochs", config.epochs},
         {"learning_rate", config.schedule.base_lr},
         {"lr_decay", config.schedule.decay},
         {"lr_decay_step", config.schedule.decay_step},
         {"lr_clip", config.schedule.clip},
         {"weight_decay", config.weight_decay},
         {"seed", config.seed},
         {"preprocess", preprocess_to_json(config.preprocess)},
         {"model", model_to_json_obj(config.model)}};
  return j.dump(2);
}

ModelConfig model_config_from_json(const std::string& text) { return model_from_json_obj(parse(text)); }

TrainConfig train_config_from_json(const std::string& text) {
  const json j = parse(text);
  TrainConfig config;
  config.batch_size = j.at("batch_size").get<std::size_t>();
  config.epochs = j.at("epochs").get<std::size_t>();
  config.schedule.base_lr = j.at("learning_rate").get<double>();
  config.schedule.decay = j.at("lr_decay").get<double>();
  config.schedule.decay_step = j.at("lr_decay_step").get<std::size_t>();
  config.schedule.clip = j.at("lr_clip").get<double>();
  config.weight_decay = j.at("weight_decay").get<double>();
  config.seed = j.at("seed").get<std::uint64_t>();
  preprocess_from_json(j.at("preprocess"), config.preprocess);
  config.model = model_from_json_obj(j.at("model"));
  return config;
}

TrainConfig load_train_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("load_train_config: cannot open " + path);
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return train_config_from_json(buffer.str());
}

void save_train_config(const std::string& path, const TrainConfig& config) {
  std::ofstream os(path);
  if (!os) throw IoError("save_train_config: cannot open " + path);
  os << to_json(config) << "\n";
}

}  // namespace tog
