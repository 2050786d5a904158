#pragma once

#include <cstddef>
#include <vector>

#include "tog/lang.hpp"
#include "tog/nn.hpp"

namespace tog::tge {

struct TgeConfig {
  std::size_t embed_dim = 768;
  std::size_t model_dim = 128;
  std::size_t heads = 8;
  std::size_t ffn_hidden = 512;
  std::size_t shape_dim = 1024;
  std::size_t shape_proj_dim = 300;
  std::vector<std::size_t> mlp_hidden{128, 64};
  double dropout = 0.1;
  // Attention logits divide by sqrt(model_dim); turning this off divides by
  // sqrt(model_dim / heads) instead.
  bool scale_by_model_dim = true;
  bool use_out_proj = true;

  void validate() const;
  std::size_t fused_dim() const { return shape_proj_dim + model_dim; }
};

struct DecoderLayerWeights {
  nn::Linear q_proj, k_proj, v_proj, out_proj;
  nn::LayerNorm ln_attn, ln_ffn;
  nn::Linear ffn_1, ffn_2;
};

struct TgeWeights {
  nn::Linear lang_proj;              // embed_dim -> model_dim
  DecoderLayerWeights object_layer;  // attends over the object-class description
  DecoderLayerWeights task_layer;    // attends over the task description
  nn::Linear shape_proj;             // shape_dim -> shape_proj_dim
  std::vector<nn::Linear> head;      // fused -> hidden... -> 1
  std::vector<nn::BatchNorm1d> head_norm;
};

TgeWeights init_tge(const TgeConfig& config, Rng& rng);

// Multi-head cross attention: queries from the instruction rows, keys and
// values from description rows; masked keys receive a -1e9 logit bias.
nn::Value cross_attention(const nn::Value& queries, const nn::Value& memory, const nn::Mask& memory_mask,
                          const DecoderLayerWeights& weights, const TgeConfig& config);

// Pre-LN-free decoder block: x = LN(x + MHA), x = LN(x + FFN); padded query
// rows are re-zeroed afterwards.
nn::Value decoder_layer(const nn::Value& queries, const nn::Mask& query_mask, const nn::Value& memory,
                        const nn::Mask& memory_mask, const DecoderLayerWeights& weights, const TgeConfig& config);

struct SampleInputs {
  nn::Value shape_feature;  // (1, shape_dim)
  lang::PaddedEmbeddings instruction;
  lang::PaddedEmbeddings object_desc;
  lang::PaddedEmbeddings task_desc;
};

struct GraspScore {
  double value = 0.0;
};

// Scores a batch of samples jointly so batch norm sees the whole batch in
// train mode; returns the rank-1 sigmoid scores. Train mode updates the
// head's batch-norm running statistics.
nn::Value tge_forward_batch(const std::vector<SampleInputs>& batch, TgeWeights& weights, const TgeConfig& config,
                            nn::Mode mode, Rng& rng);

GraspScore tge_forward(const SampleInputs& sample, TgeWeights& weights, const TgeConfig& config, nn::Mode mode,
                       Rng& rng);

}  // namespace tog::tge
