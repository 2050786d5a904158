#include "tog/train.hpp"

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <set>
#include <sstream>
#include <utility>

#include "tog/errors.hpp"
#include "tog/pointnet.hpp"
#include "tog/tge.hpp"

namespace tog::train {

namespace {

geom::PreprocessConfig eval_preprocess(geom::PreprocessConfig config) {
  config.random_rotate = false;
  config.jitter_sigma = 0.0;
  config.point_dropout = 0.0;
  return config;
}

struct SampleTexts {
  std::string instruction;
  const std::string* object_desc;
  const std::string* task_desc;
};

tge::SampleInputs build_inputs(const geom::ObjectCloud& cloud, const geom::GraspPose& pose,
                               const SampleTexts& texts, const Model& model,
                               const lang::EmbeddingProvider& provider, const geom::PreprocessConfig& preprocess,
                               Rng& rng) {
  const geom::PreprocessResult pre = geom::preprocess_with_transform(cloud, preprocess, rng);
  const Tensor gripper = pre.transform.apply(geom::transform_control_points(pose));
  const geom::JointCloud joint = geom::build_joint_cloud(pre.cloud, gripper);

  tge::SampleInputs inputs;
  inputs.shape_feature = pn::encode_joint_cloud(joint, model.config.encoder, model.encoder);
  const auto& lang_cfg = model.config.lang;
  inputs.instruction = provider.embed_text(texts.instruction, lang_cfg.max_instruction_tokens);
  inputs.object_desc = provider.embed_text(*texts.object_desc, lang_cfg.max_object_desc_tokens);
  inputs.task_desc = provider.embed_text(*texts.task_desc, lang_cfg.max_task_desc_tokens);
  return inputs;
}

std::vector<Tensor> load_clouds(const data::DatasetManifest& manifest) {
  std::vector<Tensor> clouds;
  clouds.reserve(manifest.instances.size());
  for (std::size_t i = 0; i < manifest.instances.size(); ++i) clouds.push_back(manifest.load_cloud(i));
  return clouds;
}

geom::ObjectCloud cloud_for(const data::DatasetManifest& manifest, const std::vector<Tensor>& clouds,
                            std::size_t instance_index) {
  const auto& instance = manifest.instances[instance_index];
  return geom::ObjectCloud{clouds[instance_index], instance.instance_id, instance.class_id};
}

std::vector<data::Sample> all_samples(const data::DatasetManifest& manifest) {
  std::vector<data::Sample> samples;
  for (std::size_t i = 0; i < manifest.instances.size(); ++i)
    for (std::size_t g = 0; g < manifest.instances[i].grasps.size(); ++g)
      for (const auto& [task, label] : manifest.instances[i].grasps[g].labels) samples.push_back({i, g, task});
  return samples;
}

const data::SplitDef& named_split(const data::DatasetManifest& manifest, const std::string& name) {
  const auto it = manifest.splits.find(name);
  if (it == manifest.splits.end()) throw InvalidInput("manifest has no split named '" + name + "'");
  return it->second;
}

int label_of(const data::DatasetManifest& manifest, const data::Sample& sample) {
  return manifest.instances[sample.instance].grasps[sample.grasp].labels.at(sample.task);
}

const std::string& paragraph_for(const std::map<std::string, std::vector<std::string>>& paragraphs,
                                 const std::map<std::string, std::string>& swap, const std::string& concept_name,
                                 std::size_t index) {
  std::string key = concept_name;
  if (const auto it = swap.find(concept_name); it != swap.end()) key = it->second;
  const auto it = paragraphs.find(key);
  if (it == paragraphs.end() || it->second.empty())
    throw InvalidInput("no description paragraphs for '" + key + "'");
  return it->second[std::min(index, it->second.size() - 1)];
}

}  // namespace

std::shared_ptr<lang::EmbeddingProvider> make_embedding_provider(const LangConfig& config) {
  if (const char* endpoint = std::getenv("TOGEVAL_EMBED_ENDPOINT"); endpoint && *endpoint)
    return std::make_shared<lang::HttpEmbeddingProvider>(endpoint, config.provider_dim);
  return std::make_shared<lang::HashEmbeddingProvider>(config.provider_dim, config.provider_seed);
}

TrainResult train_model(const data::DatasetManifest& manifest, const std::string& split_name,
                        const TrainConfig& config, std::ostream* log) {
  config.validate();
  const data::SplitDef& split = named_split(manifest, split_name);
  std::vector<data::Sample> samples = data::partition_samples(manifest, split, data::Partition::Train);
  if (samples.empty()) throw EmptyTrainSet("train partition of '" + split_name + "' is empty");
  if (manifest.templates.empty()) throw InvalidInput("manifest has no instruction templates");

  const std::vector<Tensor> clouds = load_clouds(manifest);
  const auto provider = make_embedding_provider(config.model.lang);

  Rng root(config.seed);
  Rng init_rng = root.fork(stable_hash("init"));
  Rng order_rng = root.fork(stable_hash("order"));
  Rng augment_rng = root.fork(stable_hash("augment"));
  Rng text_rng = root.fork(stable_hash("text"));
  Rng dropout_rng = root.fork(stable_hash("dropout"));

  TrainResult result;
  result.model = init_model(config.model, init_rng);
  auto params = model_parameters(result.model);
  std::vector<nn::Value> values;
  values.reserve(params.size());
  for (auto& entry : params) values.push_back(entry.value);
  nn::AdamConfig adam_config;
  adam_config.weight_decay = config.weight_decay;
  nn::Adam optimizer(values, adam_config);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    order_rng.shuffle(samples);
    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t begin = 0; begin < samples.size(); begin += config.batch_size) {
      const std::size_t end = std::min(begin + config.batch_size, samples.size());
      std::vector<tge::SampleInputs> batch;
      batch.reserve(end - begin);
      Tensor labels({end - begin});
      for (std::size_t b = begin; b < end; ++b) {
        const data::Sample& sample = samples[b];
        const auto& instance = manifest.instances[sample.instance];
        SampleTexts texts;
        texts.instruction = data::fill_template(
            manifest.templates[text_rng.uniform_index(manifest.templates.size())], instance.class_id, sample.task);
        const auto& class_paragraphs = manifest.class_paragraphs.at(instance.class_id);
        const auto& task_paragraphs = manifest.task_paragraphs.at(sample.task);
        texts.object_desc = &class_paragraphs[text_rng.uniform_index(class_paragraphs.size())];
        texts.task_desc = &task_paragraphs[text_rng.uniform_index(task_paragraphs.size())];

        batch.push_back(build_inputs(cloud_for(manifest, clouds, sample.instance),
                                     instance.grasps[sample.grasp].pose, texts, result.model, *provider,
                                     config.preprocess, augment_rng));
        labels.at(0, b - begin) = static_cast<double>(label_of(manifest, sample));
      }

      nn::Value scores = tge::tge_forward_batch(batch, result.model.evaluator, config.model.evaluator, nn::Mode::Train,
                                                dropout_rng);
      nn::Value loss = nn::bce_loss(scores, labels);
      nn::backward(loss);
      optimizer.step(nn::lr_at(config.schedule, optimizer.step_count()));
      optimizer.zero_grad();
      ++result.steps;
      loss_sum += loss.scalar() * static_cast<double>(end - begin);
      seen += end - begin;
    }
    const double epoch_loss = loss_sum / static_cast<double>(seen);
    result.epoch_losses.push_back(epoch_loss);
    if (log) {
      std::ostringstream line;
      line << "epoch " << epoch << " loss " << std::setprecision(17) << epoch_loss << " lr "
           << nn::lr_at(config.schedule, optimizer.step_count()) << "\n";
      *log << line.str() << std::flush;
    }
  }

  std::set<std::string> classes, tasks, instances;
  for (const auto& sample : samples) {
    classes.insert(manifest.instances[sample.instance].class_id);
    tasks.insert(sample.task);
    instances.insert(manifest.instances[sample.instance].instance_id);
  }
  result.info.split_name = split_name;
  result.info.split_mode = split.mode;
  result.info.train_classes.assign(classes.begin(), classes.end());
  result.info.train_tasks.assign(tasks.begin(), tasks.end());
  result.info.train_instances.assign(instances.begin(), instances.end());
  result.info.seed = config.seed;
  result.info.epochs = config.epochs;
  return result;
}

EvalResult evaluate_model(Model& model, const data::DatasetManifest& manifest, const EvalOptions& options,
                          const TrainInfo* train_info) {
  std::vector<data::Sample> samples = options.split_name.empty()
                                          ? all_samples(manifest)
                                          : data::partition_samples(manifest, named_split(manifest, options.split_name),
                                                                    options.partition);
  if (samples.empty()) throw EmptyBatch("no samples to evaluate");
  if (manifest.templates.empty()) throw InvalidInput("manifest has no instruction templates");

  if (train_info && options.check_overlap && !train_info->split_mode.empty()) {
    auto contains = [](const std::vector<std::string>& list, const std::string& name) {
      return std::find(list.begin(), list.end(), name) != list.end();
    };
    for (const auto& sample : samples) {
      const auto& instance = manifest.instances[sample.instance];
      bool overlap = false;
      if (train_info->split_mode == "held_out_class") overlap = contains(train_info->train_classes, instance.class_id);
      else if (train_info->split_mode == "held_out_task") overlap = contains(train_info->train_tasks, sample.task);
      else if (train_info->split_mode == "held_out_instance")
        overlap = contains(train_info->train_instances, instance.instance_id);
      if (overlap)
        throw CheckpointMismatch("evaluation would include trained data: instance '" + instance.instance_id +
                                 "', task '" + sample.task + "'");
    }
  }

  const std::vector<Tensor> clouds = load_clouds(manifest);
  const auto provider = make_embedding_provider(model.config.lang);
  const geom::PreprocessConfig preprocess = eval_preprocess(geom::PreprocessConfig{
      .target_points = model.config.input_points});
  Rng rng(mix_seed(options.seed, stable_hash("eval")));

  EvalResult result;
  result.samples.reserve(samples.size());
  constexpr std::size_t kEvalBatch = 16;
  for (std::size_t begin = 0; begin < samples.size(); begin += kEvalBatch) {
    const std::size_t end = std::min(begin + kEvalBatch, samples.size());
    std::vector<tge::SampleInputs> batch;
    batch.reserve(end - begin);
    for (std::size_t b = begin; b < end; ++b) {
      const data::Sample& sample = samples[b];
      const auto& instance = manifest.instances[sample.instance];
      SampleTexts texts;
      texts.instruction = data::fill_template(manifest.templates[0], instance.class_id, sample.task);
      texts.object_desc = &paragraph_for(manifest.class_paragraphs, options.class_desc_swap, instance.class_id, 0);
      texts.task_desc = &paragraph_for(manifest.task_paragraphs, options.task_desc_swap, sample.task, 0);
      batch.push_back(build_inputs(cloud_for(manifest, clouds, sample.instance), instance.grasps[sample.grasp].pose,
                                   texts, model, *provider, preprocess, rng));
    }
    nn::Value scores = tge::tge_forward_batch(batch, model.evaluator, model.config.evaluator, nn::Mode::Eval, rng);
    for (std::size_t b = begin; b < end; ++b) {
      const data::Sample& sample = samples[b];
      const auto& instance = manifest.instances[sample.instance];
      result.samples.push_back({instance.instance_id, instance.class_id, sample.task,
                                label_of(manifest, sample), scores.data().at(0, b - begin)});
    }
  }
  result.report = metrics::map_report(result.samples);
  return result;
}

metrics::ApReport random_baseline(const data::DatasetManifest& manifest, const data::SplitDef& split,
                                  data::Partition partition, std::uint64_t seed) {
  const std::vector<data::Sample> samples = data::partition_samples(manifest, split, partition);
  if (samples.empty()) throw EmptyBatch("no samples in the requested partition");
  Rng rng(seed);
  std::map<std::pair<std::size_t, std::size_t>, double> grasp_scores;
  std::vector<metrics::ScoredSample> scored;
  scored.reserve(samples.size());
  for (const auto& sample : samples) {
    auto [it, fresh] = grasp_scores.try_emplace({sample.instance, sample.grasp}, 0.0);
    if (fresh) it->second = rng.uniform();
    const auto& instance = manifest.instances[sample.instance];
    scored.push_back({instance.instance_id, instance.class_id, sample.task, label_of(manifest, sample), it->second});
  }
  return metrics::map_report(scored);
}

double score_grasp(Model& model, const ScoreRequest& request, std::uint64_t seed) {
  if (request.instruction.empty()) throw EmptyText("score_grasp: empty instruction");
  const auto provider = make_embedding_provider(model.config.lang);
  const geom::PreprocessConfig preprocess = eval_preprocess(geom::PreprocessConfig{
      .target_points = model.config.input_points});
  Rng rng(mix_seed(seed, stable_hash("score")));
  SampleTexts texts{request.instruction, &request.object_description, &request.task_description};
  tge::SampleInputs inputs = build_inputs(request.cloud, request.pose, texts, model, *provider, preprocess, rng);
  return tge::tge_forward(inputs, model.evaluator, model.config.evaluator, nn::Mode::Eval, rng).value;
}

}  // namespace tog::train
