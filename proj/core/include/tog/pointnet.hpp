#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <vector>

#include "tog/geometry.hpp"
#include "tog/nn.hpp"

namespace tog::pn {

enum class FpsStart {
  // Seed with row 0; fully deterministic in row order.
  FirstIndex,
  // Seed with the lexicographically smallest point and break distance ties
  // by coordinates, making the selected point set order-independent.
  Canonical,
};

// Farthest point sampling over the first three columns of points. Each pick
// maximizes the minimum distance to the already selected set; ties resolve
// to the lowest row index.
std::vector<std::size_t> fps(const Tensor& points, std::size_t k, FpsStart start = FpsStart::FirstIndex);

// Rows within ball_radius of each center (center first), truncated to
// max_group_size in row order. Coordinates are re-expressed relative to the
// center; remaining columns pass through.
std::vector<Tensor> ball_group(const Tensor& points, const std::vector<std::size_t>& centers, double ball_radius,
                               std::size_t max_group_size);
std::vector<std::vector<std::size_t>> ball_group_indices(const Tensor& points,
                                                         const std::vector<std::size_t>& centers,
                                                         double ball_radius, std::size_t max_group_size);

struct SaLayerConfig {
  std::size_t sampled_points = 0;
  double ball_radius = 0.0;
  std::size_t max_group_size = 0;
  std::vector<std::size_t> mlp_widths;
};

struct EncoderConfig {
  std::array<SaLayerConfig, 3> layers{{
      {512, 0.05, 32, {64, 128, 320}},
      {128, 0.15, 64, {256, 512, 640}},
      {1, std::numeric_limits<double>::infinity(), 0, {512, 768, 1024}},
  }};
  FpsStart fps_start = FpsStart::FirstIndex;

  void validate() const;
};

struct SaLayerWeights {
  std::vector<nn::Linear> mlp;
};

struct EncoderWeights {
  std::array<SaLayerWeights, 3> layers;
};

EncoderWeights init_encoder(const EncoderConfig& config, Rng& rng);

struct SaLayerOutput {
  Tensor positions;   // (k,3) center coordinates
  nn::Value features; // (k,d_out)
};

// One set-abstraction step: sample centers, gather ball neighborhoods,
// run the shared point MLP, and max-pool each group.
SaLayerOutput sa_layer(const Tensor& positions, const nn::Value& features, const SaLayerConfig& config,
                       const SaLayerWeights& weights, FpsStart start);

// Full encoder over a joint cloud value of shape (M,4); returns the global
// shape feature as a (1,1024) value. Coordinates participate in the
// gradient; sampling and grouping indices are treated as fixed structure.
nn::Value encode_joint_cloud(const nn::Value& joint_points, const EncoderConfig& config,
                             const EncoderWeights& weights);
nn::Value encode_joint_cloud(const geom::JointCloud& joint, const EncoderConfig& config,
                             const EncoderWeights& weights);

}  // namespace tog::pn
