#include "tog/pointnet.hpp"

#include <cmath>

#include "tog/errors.hpp"

namespace tog::pn {

namespace {

double sq_dist3(const Tensor& points, std::size_t a, std::size_t b) {
  double s = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    const double d = points.at(a, c) - points.at(b, c);
    s += d * d;
  }
  return s;
}

bool coord_less(const Tensor& points, std::size_t a, std::size_t b) {
  for (std::size_t c = 0; c < 3; ++c) {
    if (points.at(a, c) != points.at(b, c)) return points.at(a, c) < points.at(b, c);
  }
  return false;
}

void check_points(const Tensor& points, const char* op) {
  if (points.rank() != 2 || points.dim(1) < 3)
    throw ShapeMismatch(std::string(op) + ": points must be (N,>=3), got " + shape_string(points));
  if (points.dim(0) == 0) throw EmptyCloud(std::string(op) + ": no points");
}

Tensor xyz_of(const Tensor& points) {
  Tensor out({points.dim(0), 3});
  for (std::size_t r = 0; r < points.dim(0); ++r) {
    for (std::size_t c = 0; c < 3; ++c) out.at(r, c) = points.at(r, c);
  }
  return out;
}

struct LevelState {
  nn::Value xyz;       // (k,3), in the gradient path
  nn::Value features;  // (k,d), undefined on the first level when absent
  Tensor positions;    // raw copy of xyz for sampling and grouping
};

LevelState run_level(const LevelState& in, const SaLayerConfig& config, const SaLayerWeights& weights,
                     FpsStart start) {
  const auto centers = fps(in.positions, config.sampled_points, start);
  const auto groups = ball_group_indices(in.positions, centers, config.ball_radius, config.max_group_size);

  std::vector<std::size_t> flat, flat_centers, offsets{0};
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t idx : groups[g]) {
      flat.push_back(idx);
      flat_centers.push_back(centers[g]);
    }
    offsets.push_back(flat.size());
  }

  nn::Value rel = nn::sub(nn::gather_rows(in.xyz, flat), nn::gather_rows(in.xyz, flat_centers));
  nn::Value rows = in.features.defined() ? nn::concat_cols({rel, nn::gather_rows(in.features, flat)}) : rel;
  nn::Value h = rows;
  for (const auto& layer : weights.mlp) h = nn::relu(layer.forward(h));

  LevelState out;
  out.features = nn::segment_max(h, offsets);
  out.xyz = nn::gather_rows(in.xyz, centers);
  out.positions = Tensor({centers.size(), 3});
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) out.positions.at(i, c) = in.positions.at(centers[i], c);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> fps(const Tensor& points, std::size_t k, FpsStart start) {
  check_points(points, "fps");
  const std::size_t n = points.dim(0);
  if (k == 0) throw InvalidInput("fps: k must be positive");
  if (k > n) throw KTooLarge("fps: k exceeds point count");

  std::size_t first = 0;
  if (start == FpsStart::Canonical) {
    for (std::size_t i = 1; i < n; ++i) {
      if (coord_less(points, i, first)) first = i;
    }
  }

  std::vector<std::size_t> selected{first};
  std::vector<char> taken(n, 0);
  taken[first] = 1;
  std::vector<double> min_dist(n);
  for (std::size_t i = 0; i < n; ++i) min_dist[i] = sq_dist3(points, i, first);

  while (selected.size() < k) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      if (best == n || min_dist[i] > min_dist[best]) {
        best = i;
      } else if (min_dist[i] == min_dist[best] && start == FpsStart::Canonical && coord_less(points, i, best)) {
        best = i;
      }
    }
    selected.push_back(best);
    taken[best] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!taken[i]) min_dist[i] = std::min(min_dist[i], sq_dist3(points, i, best));
    }
  }
  return selected;
}

std::vector<std::vector<std::size_t>> ball_group_indices(const Tensor& points,
                                                         const std::vector<std::size_t>& centers,
                                                         double ball_radius, std::size_t max_group_size) {
  check_points(points, "ball_group");
  if (ball_radius <= 0.0) throw InvalidInput("ball_group: radius must be positive");
  const std::size_t n = points.dim(0);
  const double r2 = std::isinf(ball_radius) ? std::numeric_limits<double>::infinity() : ball_radius * ball_radius;
  std::vector<std::vector<std::size_t>> groups;
  groups.reserve(centers.size());
  for (std::size_t c : centers) {
    if (c >= n) throw InvalidInput("ball_group: center index out of range");
    std::vector<std::size_t> group{c};
    for (std::size_t i = 0; i < n && (max_group_size == 0 || group.size() < max_group_size); ++i) {
      if (i == c) continue;
      if (sq_dist3(points, i, c) <= r2) group.push_back(i);
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

std::vector<Tensor> ball_group(const Tensor& points, const std::vector<std::size_t>& centers, double ball_radius,
                               std::size_t max_group_size) {
  auto groups = ball_group_indices(points, centers, ball_radius, max_group_size);
  const std::size_t cols = points.dim(1);
  std::vector<Tensor> out;
  out.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    Tensor rows({groups[g].size(), cols});
    for (std::size_t i = 0; i < groups[g].size(); ++i) {
      const std::size_t src = groups[g][i];
      for (std::size_t c = 0; c < 3; ++c) rows.at(i, c) = points.at(src, c) - points.at(centers[g], c);
      for (std::size_t c = 3; c < cols; ++c) rows.at(i, c) = points.at(src, c);
    }
    out.push_back(std::move(rows));
  }
  return out;
}

void EncoderConfig::validate() const {
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& layer = layers[i];
    if (layer.mlp_widths.empty()) throw InvalidInput("EncoderConfig: empty mlp_widths");
    if (layer.sampled_points == 0) throw InvalidInput("EncoderConfig: sampled_points must be positive");
    if (!(layer.ball_radius > 0.0)) throw InvalidInput("EncoderConfig: ball_radius must be positive");
  }
  if (layers[0].sampled_points <= layers[1].sampled_points || layers[1].sampled_points <= layers[2].sampled_points)
    throw InvalidInput("EncoderConfig: sampled point counts must strictly decrease");
  if (layers[2].sampled_points != 1) throw InvalidInput("EncoderConfig: final layer must pool to one point");
}

EncoderWeights init_encoder(const EncoderConfig& config, Rng& rng) {
  config.validate();
  EncoderWeights weights;
  std::size_t feature_dim = 1;  // flag channel
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t in = 3 + feature_dim;
    for (std::size_t width : config.layers[i].mlp_widths) {
      weights.layers[i].mlp.emplace_back(in, width, rng);
      in = width;
    }
    feature_dim = config.layers[i].mlp_widths.back();
  }
  return weights;
}

SaLayerOutput sa_layer(const Tensor& positions, const nn::Value& features, const SaLayerConfig& config,
                       const SaLayerWeights& weights, FpsStart start) {
  check_points(positions, "sa_layer");
  LevelState in;
  in.positions = xyz_of(positions);
  in.xyz = nn::constant(in.positions);
  in.features = features;
  LevelState out = run_level(in, config, weights, start);
  return SaLayerOutput{std::move(out.positions), out.features};
}

nn::Value encode_joint_cloud(const nn::Value& joint_points, const EncoderConfig& config,
                             const EncoderWeights& weights) {
  config.validate();
  if (joint_points.data().rank() != 2 || joint_points.cols() != 4)
    throw ShapeMismatch("encode_joint_cloud: expected (M,4) input");

  LevelState state;
  state.xyz = nn::slice_cols(joint_points, 0, 3);
  state.features = nn::slice_cols(joint_points, 3, 4);
  state.positions = xyz_of(joint_points.data());

  for (std::size_t i = 0; i < 3; ++i) {
    state = run_level(state, config.layers[i], weights.layers[i], config.fps_start);
  }
  return state.features;  // (1,1024)
}

nn::Value encode_joint_cloud(const geom::JointCloud& joint, const EncoderConfig& config,
                             const EncoderWeights& weights) {
  return encode_joint_cloud(nn::constant(joint.points), config, weights);
}

}  // namespace tog::pn
