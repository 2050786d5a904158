#include "tog/tge.hpp"

#include <cmath>

#include "tog/errors.hpp"

namespace tog::tge {

namespace {

constexpr double kMaskBias = -1e9;

Tensor mask_bias_row(const nn::Mask& mask) {
  Tensor bias({mask.size()});
  bool any = false;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    bias[i] = mask[i] ? 0.0 : kMaskBias;
    any = any || mask[i];
  }
  if (!any) throw AllKeysMasked("cross_attention: every key is masked");
  return bias;
}

}  // namespace

void TgeConfig::validate() const {
  if (model_dim == 0 || heads == 0 || model_dim % heads != 0)
    throw InvalidInput("TgeConfig: heads must divide model_dim");
  if (embed_dim == 0 || ffn_hidden == 0 || shape_dim == 0 || shape_proj_dim == 0)
    throw InvalidInput("TgeConfig: zero dimension");
  if (mlp_hidden.empty()) throw InvalidInput("TgeConfig: head needs at least one hidden layer");
  if (dropout < 0.0 || dropout >= 1.0) throw InvalidInput("TgeConfig: dropout must be in [0,1)");
}

TgeWeights init_tge(const TgeConfig& config, Rng& rng) {
  config.validate();
  auto make_layer = [&](DecoderLayerWeights& layer) {
    layer.q_proj = nn::Linear(config.model_dim, config.model_dim, rng);
    layer.k_proj = nn::Linear(config.model_dim, config.model_dim, rng);
    layer.v_proj = nn::Linear(config.model_dim, config.model_dim, rng);
    layer.out_proj = nn::Linear(config.model_dim, config.model_dim, rng);
    layer.ln_attn = nn::LayerNorm(config.model_dim);
    layer.ln_ffn = nn::LayerNorm(config.model_dim);
    layer.ffn_1 = nn::Linear(config.model_dim, config.ffn_hidden, rng);
    layer.ffn_2 = nn::Linear(config.ffn_hidden, config.model_dim, rng);
  };
  TgeWeights weights;
  weights.lang_proj = nn::Linear(config.embed_dim, config.model_dim, rng);
  make_layer(weights.object_layer);
  make_layer(weights.task_layer);
  weights.shape_proj = nn::Linear(config.shape_dim, config.shape_proj_dim, rng);
  std::size_t in = config.fused_dim();
  for (std::size_t width : config.mlp_hidden) {
    weights.head.emplace_back(in, width, rng);
    weights.head_norm.emplace_back(width);
    in = width;
  }
  weights.head.emplace_back(in, 1, rng);
  return weights;
}

nn::Value cross_attention(const nn::Value& queries, const nn::Value& memory, const nn::Mask& memory_mask,
                          const DecoderLayerWeights& weights, const TgeConfig& config) {
  if (queries.cols() != config.model_dim || memory.cols() != config.model_dim)
    throw ShapeMismatch("cross_attention: inputs must have model width");
  if (memory_mask.size() != memory.rows()) throw ShapeMismatch("cross_attention: memory mask length mismatch");

  const std::size_t head_dim = config.model_dim / config.heads;
  const double scale =
      1.0 / std::sqrt(static_cast<double>(config.scale_by_model_dim ? config.model_dim : head_dim));

  nn::Value q = weights.q_proj.forward(queries);
  nn::Value k = weights.k_proj.forward(memory);
  nn::Value v = weights.v_proj.forward(memory);
  nn::Value bias = nn::constant(mask_bias_row(memory_mask));

  std::vector<nn::Value> heads;
  heads.reserve(config.heads);
  for (std::size_t h = 0; h < config.heads; ++h) {
    const std::size_t c0 = h * head_dim, c1 = (h + 1) * head_dim;
    nn::Value scores = nn::scale(nn::matmul_nt(nn::slice_cols(q, c0, c1), nn::slice_cols(k, c0, c1)), scale);
    nn::Value attn = nn::softmax_rows(nn::add_row(scores, bias));
    heads.push_back(nn::matmul(attn, nn::slice_cols(v, c0, c1)));
  }
  nn::Value merged = config.heads == 1 ? heads.front() : nn::concat_cols(heads);
  return config.use_out_proj ? weights.out_proj.forward(merged) : merged;
}

nn::Value decoder_layer(const nn::Value& queries, const nn::Mask& query_mask, const nn::Value& memory,
                        const nn::Mask& memory_mask, const DecoderLayerWeights& weights, const TgeConfig& config) {
  nn::Value attended = cross_attention(queries, memory, memory_mask, weights, config);
  nn::Value x = weights.ln_attn.forward(nn::add(queries, attended));
  nn::Value ffn = weights.ffn_2.forward(nn::relu(weights.ffn_1.forward(x)));
  x = weights.ln_ffn.forward(nn::add(x, ffn));
  return nn::zero_rows(x, query_mask);
}

nn::Value tge_forward_batch(const std::vector<SampleInputs>& batch, TgeWeights& weights, const TgeConfig& config,
                            nn::Mode mode, Rng& rng) {
  config.validate();
  if (batch.empty()) throw EmptyBatch("tge_forward: empty batch");

  std::vector<nn::Value> fused_rows;
  fused_rows.reserve(batch.size());
  for (const auto& sample : batch) {
    if (sample.shape_feature.cols() != config.shape_dim || sample.shape_feature.rows() != 1)
      throw ShapeMismatch("tge_forward: shape feature must be (1, shape_dim)");
    nn::Value instr = lang::project_to_model_dim(sample.instruction, weights.lang_proj.w, weights.lang_proj.b);
    nn::Value object_desc =
        lang::project_to_model_dim(sample.object_desc, weights.lang_proj.w, weights.lang_proj.b);
    nn::Value task_desc = lang::project_to_model_dim(sample.task_desc, weights.lang_proj.w, weights.lang_proj.b);

    nn::Value x = decoder_layer(instr, sample.instruction.mask, object_desc, sample.object_desc.mask,
                                weights.object_layer, config);
    x = decoder_layer(x, sample.instruction.mask, task_desc, sample.task_desc.mask, weights.task_layer, config);
    nn::Value pooled = nn::masked_mean_rows(x, sample.instruction.mask);  // (model_dim)

    nn::Value shape = weights.shape_proj.forward(sample.shape_feature);  // (1, shape_proj_dim)
    nn::Value fused = nn::concat_cols({shape, nn::reshape(pooled, {1, config.model_dim})});
    fused_rows.push_back(nn::reshape(fused, {config.fused_dim()}));
  }

  nn::Value h = nn::stack_rows(fused_rows);  // (B, fused_dim)
  for (std::size_t i = 0; i + 1 < weights.head.size(); ++i) {
    h = weights.head[i].forward(h);
    h = weights.head_norm[i].forward(h, mode);
    h = nn::relu(h);
    h = nn::dropout(h, config.dropout, rng, mode);
  }
  h = weights.head.back().forward(h);  // (B,1)
  return nn::sigmoid(nn::reshape(h, {batch.size()}));
}

GraspScore tge_forward(const SampleInputs& sample, TgeWeights& weights, const TgeConfig& config, nn::Mode mode,
                       Rng& rng) {
  nn::Value scores = tge_forward_batch({sample}, weights, config, mode, rng);
  const double value = scores.data()[0];
  if (!(value > 0.0 && value < 1.0)) throw NumericError("tge_forward: score outside (0,1)");
  return GraspScore{value};
}

}  // namespace tog::tge
