#include "tog/tge.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "tog/errors.hpp"
#include "test_support.hpp"

namespace {

namespace tge = tog::tge;
namespace nn = tog::nn;
namespace lang = tog::lang;
using togtest::random_tensor;

tge::TgeConfig tiny_config() {
  tge::TgeConfig cfg;
  cfg.embed_dim = 6;
  cfg.model_dim = 4;
  cfg.heads = 2;
  cfg.ffn_hidden = 6;
  cfg.shape_dim = 5;
  cfg.shape_proj_dim = 4;
  cfg.mlp_hidden = {4};
  cfg.dropout = 0.3;
  return cfg;
}

tge::SampleInputs make_sample(const lang::EmbeddingProvider& provider, const tge::TgeConfig& cfg,
                              const std::string& instruction, const std::string& object_desc,
                              const std::string& task_desc, tog::Rng& rng) {
  tge::SampleInputs s;
  s.shape_feature = nn::constant(random_tensor({1, cfg.shape_dim}, rng));
  s.instruction = provider.embed_text(instruction, 4);
  s.object_desc = provider.embed_text(object_desc, 5);
  s.task_desc = provider.embed_text(task_desc, 5);
  return s;
}

nn::Linear identity_linear(std::size_t d) {
  nn::Linear lin;
  tog::Tensor eye({d, d});
  for (std::size_t i = 0; i < d; ++i) eye.at(i, i) = 1.0;
  lin.w = nn::parameter(std::move(eye));
  lin.b = nn::parameter(tog::Tensor::zeros({d}));
  return lin;
}

std::vector<nn::Value> collect_params(tge::TgeWeights& w) {
  std::vector<nn::Value> params{w.lang_proj.w, w.lang_proj.b};
  for (tge::DecoderLayerWeights* layer : {&w.object_layer, &w.task_layer}) {
    for (nn::Linear* lin : {&layer->q_proj, &layer->k_proj, &layer->v_proj, &layer->out_proj, &layer->ffn_1,
                            &layer->ffn_2}) {
      params.push_back(lin->w);
      params.push_back(lin->b);
    }
    params.push_back(layer->ln_attn.gain);
    params.push_back(layer->ln_attn.bias);
    params.push_back(layer->ln_ffn.gain);
    params.push_back(layer->ln_ffn.bias);
  }
  params.push_back(w.shape_proj.w);
  params.push_back(w.shape_proj.b);
  for (auto& lin : w.head) {
    params.push_back(lin.w);
    params.push_back(lin.b);
  }
  for (auto& bn : w.head_norm) {
    params.push_back(bn.gain);
    params.push_back(bn.bias);
  }
  return params;
}

TEST(TgeConfig, ValidateCatchesBadSettings) {
  tge::TgeConfig cfg = tiny_config();
  cfg.heads = 3;  // does not divide model_dim 4
  EXPECT_THROW(cfg.validate(), tog::InvalidInput);
  cfg = tiny_config();
  cfg.shape_proj_dim = 0;
  EXPECT_THROW(cfg.validate(), tog::InvalidInput);
  cfg = tiny_config();
  cfg.mlp_hidden.clear();
  EXPECT_THROW(cfg.validate(), tog::InvalidInput);
  cfg = tiny_config();
  cfg.dropout = 1.0;
  EXPECT_THROW(cfg.validate(), tog::InvalidInput);
}

TEST(TgeConfig, DefaultsDescribeTheFullSizeEvaluator) {
  tge::TgeConfig cfg;
  cfg.validate();
  EXPECT_EQ(cfg.embed_dim, 768u);
  EXPECT_EQ(cfg.model_dim, 128u);
  EXPECT_EQ(cfg.heads, 8u);
  EXPECT_EQ(cfg.shape_dim, 1024u);
  EXPECT_EQ(cfg.shape_proj_dim, 300u);
  EXPECT_EQ(cfg.fused_dim(), 428u);
  EXPECT_TRUE(cfg.scale_by_model_dim);
}

TEST(CrossAttention, SingleHeadIdentityProjectionsMatchHandComputation) {
  tge::TgeConfig cfg;
  cfg.model_dim = 2;
  cfg.heads = 1;
  cfg.use_out_proj = false;
  tge::DecoderLayerWeights layer;
  layer.q_proj = identity_linear(2);
  layer.k_proj = identity_linear(2);
  layer.v_proj = identity_linear(2);

  nn::Value queries = nn::constant(tog::Tensor::from_rows({{1.0, 0.0}}));
  nn::Value memory = nn::constant(tog::Tensor::from_rows({{1.0, 0.0}, {0.0, 1.0}}));
  nn::Value out = tge::cross_attention(queries, memory, {1, 1}, layer, cfg);

  const double e0 = std::exp(1.0 / std::sqrt(2.0));
  const double w0 = e0 / (e0 + 1.0);
  const double w1 = 1.0 / (e0 + 1.0);
  ASSERT_EQ(out.rows(), 1u);
  ASSERT_EQ(out.cols(), 2u);
  EXPECT_NEAR(out.data().at(0, 0), w0, 1e-12);
  EXPECT_NEAR(out.data().at(0, 1), w1, 1e-12);
}

TEST(CrossAttention, MaskedKeysContributeNothingBitwise) {
  tog::Rng rng(80);
  tge::TgeConfig cfg = tiny_config();
  tge::TgeWeights weights = tge::init_tge(cfg, rng);

  nn::Value queries = nn::constant(random_tensor({3, cfg.model_dim}, rng));
  tog::Tensor mem = random_tensor({4, cfg.model_dim}, rng);
  tog::Tensor mem_altered = mem;
  for (std::size_t c = 0; c < cfg.model_dim; ++c) mem_altered.at(3, c) = 123.0 + static_cast<double>(c);

  const nn::Mask mask{1, 1, 1, 0};
  nn::Value a = tge::cross_attention(queries, nn::constant(mem), mask, weights.object_layer, cfg);
  nn::Value b = tge::cross_attention(queries, nn::constant(mem_altered), mask, weights.object_layer, cfg);
  ASSERT_TRUE(a.data().same_shape(b.data()));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.data()[i], b.data()[i]);
}

TEST(CrossAttention, ScaleFlagChangesTheLogitsUnlessHeadDimMatches) {
  tog::Rng rng(81);
  tge::TgeConfig cfg = tiny_config();  // model_dim 4, heads 2 -> head_dim 2
  tge::TgeWeights weights = tge::init_tge(cfg, rng);
  nn::Value queries = nn::constant(random_tensor({2, cfg.model_dim}, rng));
  nn::Value memory = nn::constant(random_tensor({3, cfg.model_dim}, rng));

  cfg.scale_by_model_dim = true;
  nn::Value a = tge::cross_attention(queries, memory, {1, 1, 1}, weights.object_layer, cfg);
  cfg.scale_by_model_dim = false;
  nn::Value b = tge::cross_attention(queries, memory, {1, 1, 1}, weights.object_layer, cfg);
  double delta = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) delta = std::max(delta, std::fabs(a.data()[i] - b.data()[i]));
  EXPECT_GT(delta, 1e-9);
}

TEST(CrossAttention, RejectsBadShapesAndFullMasks) {
  tog::Rng rng(82);
  tge::TgeConfig cfg = tiny_config();
  tge::TgeWeights weights = tge::init_tge(cfg, rng);
  nn::Value queries = nn::constant(random_tensor({2, cfg.model_dim}, rng));
  nn::Value memory = nn::constant(random_tensor({3, cfg.model_dim}, rng));
  EXPECT_THROW(tge::cross_attention(queries, memory, {1, 1}, weights.object_layer, cfg), tog::ShapeMismatch);
  EXPECT_THROW(tge::cross_attention(queries, memory, {0, 0, 0}, weights.object_layer, cfg), tog::AllKeysMasked);
  nn::Value narrow = nn::constant(random_tensor({2, 3}, rng));
  EXPECT_THROW(tge::cross_attention(narrow, memory, {1, 1, 1}, weights.object_layer, cfg), tog::ShapeMismatch);
}

TEST(DecoderLayer, PaddedQueryRowsComeOutExactlyZero) {
  tog::Rng rng(83);
  tge::TgeConfig cfg = tiny_config();
  tge::TgeWeights weights = tge::init_tge(cfg, rng);
  nn::Value queries = nn::constant(random_tensor({3, cfg.model_dim}, rng));
  nn::Value memory = nn::constant(random_tensor({3, cfg.model_dim}, rng));
  nn::Value out = tge::decoder_layer(queries, {1, 0, 1}, memory, {1, 1, 1}, weights.object_layer, cfg);
  for (std::size_t c = 0; c < cfg.model_dim; ++c) EXPECT_EQ(out.data().at(1, c), 0.0);
}

TEST(DecoderLayer, GradientMatchesFiniteDifferences) {
  tog::Rng rng(84);
  tge::TgeConfig cfg = tiny_config();
  tge::TgeWeights weights = tge::init_tge(cfg, rng);
  nn::Value queries = nn::parameter(random_tensor({3, cfg.model_dim}, rng));
  nn::Value memory = nn::parameter(random_tensor({4, cfg.model_dim}, rng));
  const nn::Mask qmask{1, 1, 0};
  const nn::Mask mmask{1, 1, 1, 0};

  std::vector<nn::Value> params{queries, memory};
  tge::DecoderLayerWeights& layer = weights.object_layer;
  for (nn::Linear* lin : {&layer.q_proj, &layer.k_proj, &layer.v_proj, &layer.out_proj, &layer.ffn_1,
                          &layer.ffn_2}) {
    params.push_back(lin->w);
    params.push_back(lin->b);
  }
  params.push_back(layer.ln_attn.gain);
  params.push_back(layer.ln_attn.bias);
  params.push_back(layer.ln_ffn.gain);
  params.push_back(layer.ln_ffn.bias);

  auto forward = [&] {
    nn::Value out = tge::decoder_layer(queries, qmask, memory, mmask, layer, cfg);
    return nn::sum(nn::mul(out, out));
  };
  EXPECT_LT(togtest::check_gradients(forward, params).max_rel, 1e-4);
}

TEST(TgeForward, ScoreIsStrictlyBetweenZeroAndOne) {
  tog::Rng rng(85);
  tge::TgeConfig cfg = tiny_config();
  tge::TgeWeights weights = tge::init_tge(cfg, rng);
  lang::HashEmbeddingProvider provider(cfg.embed_dim, 0);
  tge::SampleInputs s = make_sample(provider, cfg, "pour from the mug", "a ceramic mug", "pouring tips", rng);
  tog::Rng fwd(1);
  tge::GraspScore score = tge::tge_forward(s, weights, cfg, nn::Mode::Eval, fwd);
  EXPECT_GT(score.value, 0.0);
  EXPECT_LT(score.value, 1.0);
}

TEST(TgeForward, SaturatedHeadIsRejectedNotSilentlyClamped) {
  tog::Rng rng(86);
  tge::TgeConfig cfg = tiny_config();
  tge::TgeWeights weights = tge::init_tge(cfg, rng);
  weights.head.back().b.data()[0] = 1000.0;  // drives the sigmoid to exactly 1.0
  lang::HashEmbeddingProvider provider(cfg.embed_dim, 0);
  tge::SampleInputs s = make_sample(provider, cfg, "lift the pot", "a steel pot", "lifting", rng);
  tog::Rng fwd(1);
  EXPECT_THROW(tge::tge_forward(s, weights, cfg, nn::Mode::Eval, fwd), tog::NumericError);
}

TEST(TgeForward, PaddedRowAlterationsNeverChangeTheScore) {
  tog::Rng rng(87);
  tge::TgeConfig cfg = tiny_config();
  tge::TgeWeights weights = tge::init_tge(cfg, rng);
  lang::HashEmbeddingProvider provider(cfg.embed_dim, 0);
  tge::SampleInputs s = make_sample(provider, cfg, "hang the cup", "a small cup", "hanging it up", rng);
  ASSERT_EQ(s.instruction.mask[3], 0);  // three tokens, one padded row
  ASSERT_EQ(s.object_desc.mask[3], 0);

  tog::Rng fwd_a(1);
  const double before = tge::tge_forward(s, weights, cfg, nn::Mode::Eval, fwd_a).value;

  for (std::size_t c = 0; c < cfg.embed_dim; ++c) {
    s.instruction.matrix.at(3, c) = 7.0;
    s.object_desc.matrix.at(3, c) = -4.0;
    s.task_desc.matrix.at(4, c) = 11.0;
  }
  tog::Rng fwd_b(1);
  const double after = tge::tge_forward(s, weights, cfg, nn::Mode::Eval, fwd_b).value;
  EXPECT_EQ(before, after);
}

TEST(TgeForward, EvalModeIsDeterministicAndFrozen) {
  tog::Rng rng(88);
  tge::TgeConfig cfg = tiny_config();
  tge::TgeWeights weights = tge::init_tge(cfg, rng);
  lang::HashEmbeddingProvider provider(cfg.embed_dim, 0);
  tge::SampleInputs s = make_sample(provider, cfg, "scoop with the ladle", "a deep ladle", "scooping", rng);

  tog::Tensor mean_before = weights.head_norm[0].running_mean;
  tog::Rng fwd_a(1), fwd_b(2);  // different rng state must not matter in eval
  const double a = tge::tge_forward(s, weights, cfg, nn::Mode::Eval, fwd_a).value;
  const double b = tge::tge_forward(s, weights, cfg, nn::Mode::Eval, fwd_b).value;
  EXPECT_EQ(a, b);
  for (std::size_t i = 0; i < mean_before.size(); ++i) {
    EXPECT_EQ(weights.head_norm[0].running_mean[i], mean_before[i]);
  }
}

TEST(TgeForward, TrainModeUpdatesRunningStatistics) {
  tog::Rng rng(89);
  tge::TgeConfig cfg = tiny_config();
  tge::TgeWeights weights = tge::init_tge(cfg, rng);
  lang::HashEmbeddingProvider provider(cfg.embed_dim, 0);
  std::vector<tge::SampleInputs> batch{
      make_sample(provider, cfg, "pour the water", "a tall mug", "pouring", rng),
      make_sample(provider, cfg, "hand it over", "a steel pan", "handing over", rng),
  };
  tog::Tensor mean_before = weights.head_norm[0].running_mean;
  tog::Rng fwd(1);
  (void)tge::tge_forward_batch(batch, weights, cfg, nn::Mode::Train, fwd);
  double delta = 0.0;
  for (std::size_t i = 0; i < mean_before.size(); ++i) {
    delta += std::fabs(weights.head_norm[0].running_mean[i] - mean_before[i]);
  }
  EXPECT_GT(delta, 0.0);
}

TEST(TgeForward, EvalScoresDoNotDependOnBatchCompanions) {
  tog::Rng rng(90);
  tge::TgeConfig cfg = tiny_config();
  tge::TgeWeights weights = tge::init_tge(cfg, rng);
  lang::HashEmbeddingProvider provider(cfg.embed_dim, 0);
  tge::SampleInputs target = make_sample(provider, cfg, "grasp the rim", "a wide bowl", "grasping", rng);
  std::vector<tge::SampleInputs> batch{
      target,
      make_sample(provider, cfg, "hang the spatula", "a flat spatula", "hanging", rng),
      make_sample(provider, cfg, "scoop the rice", "a deep spoon", "scooping", rng),
  };
  tog::Rng fwd_a(1), fwd_b(1);
  const double alone = tge::tge_forward_batch({target}, weights, cfg, nn::Mode::Eval, fwd_a).data()[0];
  const double batched = tge::tge_forward_batch(batch, weights, cfg, nn::Mode::Eval, fwd_b).data()[0];
  EXPECT_NEAR(alone, batched, 1e-6);
}

TEST(TgeForward, RejectsEmptyBatchAndBadShapeFeature) {
  tog::Rng rng(91);
  tge::TgeConfig cfg = tiny_config();
  tge::TgeWeights weights = tge::init_tge(cfg, rng);
  tog::Rng fwd(1);
  EXPECT_THROW(tge::tge_forward_batch({}, weights, cfg, nn::Mode::Eval, fwd), tog::EmptyBatch);

  lang::HashEmbeddingProvider provider(cfg.embed_dim, 0);
  tge::SampleInputs s = make_sample(provider, cfg, "lift the pan", "a heavy pan", "lifting", rng);
  s.shape_feature = nn::constant(random_tensor({1, cfg.shape_dim + 1}, rng));
  EXPECT_THROW(tge::tge_forward(s, weights, cfg, nn::Mode::Eval, fwd), tog::ShapeMismatch);
}

TEST(TgeForward, FullPathGradientMatchesFiniteDifferences) {
  tog::Rng rng(92);
  tge::TgeConfig cfg = tiny_config();
  tge::TgeWeights weights = tge::init_tge(cfg, rng);
  lang::HashEmbeddingProvider provider(cfg.embed_dim, 0);
  std::vector<tge::SampleInputs> batch{
      make_sample(provider, cfg, "pour from the spout", "a ceramic teapot", "tilt and pour", rng),
      make_sample(provider, cfg, "hand over the knife", "a short knife", "pass it safely", rng),
  };
  tog::Tensor labels = tog::Tensor::row({1.0, 0.0});

  std::vector<nn::Value> params = collect_params(weights);
  auto forward = [&] {
    tog::Rng fwd(7);
    nn::Value scores = tge::tge_forward_batch(batch, weights, cfg, nn::Mode::Train, fwd);
    return nn::bce_loss(scores, labels);
  };
  EXPECT_LT(togtest::check_gradients(forward, params).max_rel, 1e-3);
}

}  // namespace
