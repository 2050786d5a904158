#include "tog/checkpoint.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tog/errors.hpp"

namespace tog {

namespace {

using nlohmann::json;

constexpr const char* kManifestFile = "checkpoint.json";
constexpr const char* kBlobFile = "checkpoint.bin";

void write_f32_le(std::ostream& os, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  const unsigned char b[4] = {static_cast<unsigned char>(bits & 0xff),
                              static_cast<unsigned char>((bits >> 8) & 0xff),
                              static_cast<unsigned char>((bits >> 16) & 0xff),
                              static_cast<unsigned char>((bits >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

float read_f32_le(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  const std::uint32_t bits = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
                             (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

json info_to_json(const TrainInfo& info) {
  return {{"split_name", info.split_name},          {"split_mode", info.split_mode},
          {"train_classes", info.train_classes},    {"train_tasks", info.train_tasks},
          {"train_instances", info.train_instances}, {"seed", info.seed},
          {"epochs", info.epochs}};
}

TrainInfo info_from_json(const json& j) {
  TrainInfo info;
  info.split_name = j.at("split_name").get<std::string>();
  info.split_mode = j.at("split_mode").get<std::string>();
  info.train_classes = j.at("train_classes").get<std::vector<std::string>>();
  info.train_tasks = j.at("train_tasks").get<std::vector<std::string>>();
  info.train_instances = j.at("train_instances").get<std::vector<std::string>>();
  info.seed = j.at("seed").get<std::uint64_t>();
  info.epochs = j.at("epochs").get<std::size_t>();
  return info;
}

}  // namespace

void save_checkpoint(const std::string& dir, Model& model, std::size_t optimizer_step, const TrainInfo& info) {
  std::filesystem::create_directories(dir);
  const auto params = model_parameters(model);
  const auto buffers = model_buffers(model);

  json param_list = json::array();
  json buffer_list = json::array();
  {
    std::ofstream blob(std::filesystem::path(dir) / kBlobFile, std::ios::binary);
    if (!blob) throw IoError("save_checkpoint: cannot open blob file");
    for (const auto& entry : params) {
      param_list.push_back({{"name", entry.name}, {"shape", entry.value.shape()}});
      for (double v : entry.value.data()) write_f32_le(blob, static_cast<float>(v));
    }
    for (const auto& entry : buffers) {
      buffer_list.push_back({{"name", entry.name}, {"shape", entry.tensor->shape()}});
      for (double v : *entry.tensor) write_f32_le(blob, static_cast<float>(v));
    }
    if (!blob) throw IoError("save_checkpoint: blob write failed");
  }

  json manifest{{"format", "tog-checkpoint"},
                {"version", 1},
                {"blob", kBlobFile},
                {"optimizer_step", optimizer_step},
                {"model_config", json::parse(to_json(model.config))},
                {"train_info", info_to_json(info)},
                {"params", param_list},
                {"buffers", buffer_list}};
  std::ofstream os(std::filesystem::path(dir) / kManifestFile);
  if (!os) throw IoError("save_checkpoint: cannot open manifest file");
  os << manifest.dump(2) << "\n";
  if (!os) throw IoError("save_checkpoint: manifest write failed");
}

LoadedCheckpoint load_checkpoint(const std::string& dir) {
  std::ifstream is(std::filesystem::path(dir) / kManifestFile);
  if (!is) throw IoError("load_checkpoint: cannot open manifest in " + dir);
  std::ostringstream buffer;
  buffer << is.rdbuf();
  json manifest = json::parse(buffer.str(), nullptr, false);
  if (manifest.is_discarded()) throw CheckpointMismatch("load_checkpoint: malformed manifest");
  if (manifest.value("format", "") != "tog-checkpoint")
    throw CheckpointMismatch("load_checkpoint: unrecognized format");

  LoadedCheckpoint result;
  result.optimizer_step = manifest.at("optimizer_step").get<std::size_t>();
  result.info = info_from_json(manifest.at("train_info"));

  Rng rng(0);
  result.model = init_model(model_config_from_json(manifest.at("model_config").dump()), rng);

  auto params = model_parameters(result.model);
  auto buffers = model_buffers(result.model);
  const auto& param_list = manifest.at("params");
  const auto& buffer_list = manifest.at("buffers");
  if (param_list.size() != params.size() || buffer_list.size() != buffers.size())
    throw CheckpointMismatch("load_checkpoint: entry count mismatch");

  std::ifstream blob(std::filesystem::path(dir) / manifest.at("blob").get<std::string>(), std::ios::binary);
  if (!blob) throw IoError("load_checkpoint: cannot open blob in " + dir);

  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto declared = param_list[i].at("shape").get<std::vector<std::size_t>>();
    if (param_list[i].at("name").get<std::string>() != params[i].name || declared != params[i].value.shape())
      throw CheckpointMismatch("load_checkpoint: parameter mismatch at " + params[i].name);
    Tensor& t = params[i].value.data();
    for (double& v : t) v = static_cast<double>(read_f32_le(blob));
  }
  for (std::size_t i = 0; i < buffers.size(); ++i) {
    const auto declared = buffer_list[i].at("shape").get<std::vector<std::size_t>>();
    if (buffer_list[i].at("name").get<std::string>() != buffers[i].name || declared != buffers[i].tensor->shape())
      throw CheckpointMismatch("load_checkpoint: buffer mismatch at " + buffers[i].name);
    for (double& v : *buffers[i].tensor) v = static_cast<double>(read_f32_le(blob));
  }
  if (!blob) throw CheckpointMismatch("load_checkpoint: blob shorter than manifest");
  return result;
}

}  // namespace tog
