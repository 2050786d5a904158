#pragma once

#include <string>

#include "tog/random.hpp"
#include "tog/tensor.hpp"

namespace tog::geom {

// Object surface points in a common object frame, one xyz row per point.
struct ObjectCloud {
  Tensor points;  // (N,3)
  std::string instance_id;
  std::string class_id;

  std::size_t size() const { return points.rank() == 2 ? points.dim(0) : 0; }
  void validate() const;
};

// Rigid gripper pose: rotation (3,3) and translation (3) in the object frame.
struct GraspPose {
  Tensor rotation;
  Tensor translation;

  GraspPose();
  GraspPose(Tensor rotation, Tensor translation);

  // Orthonormality within 1e-6 and determinant +1.
  void validate() const;
  Tensor apply(const Tensor& points) const;  // (N,3) -> (N,3)
};

GraspPose identity_pose();
// Uniform random rotation from a normalized Gaussian quaternion.
Tensor random_rotation(Rng& rng);

// Canonical two-finger gripper skeleton: base, wrist, left/right finger
// roots, left/right fingertips. Rows 3,4 and 5,6 are mirrored in x.
Tensor control_points();
Tensor transform_control_points(const GraspPose& pose);

// Object points and transformed gripper points side by side, with a binary
// flag column: 0 for object rows, 1 for the six gripper rows appended last.
struct JointCloud {
  Tensor points;  // (N+6,4)
};

JointCloud build_joint_cloud(const ObjectCloud& cloud, const GraspPose& pose);
JointCloud build_joint_cloud(const ObjectCloud& cloud, const Tensor& gripper_points);

struct PreprocessConfig {
  bool mean_center = true;
  bool scale_to_unit = true;
  bool random_rotate = true;
  double jitter_sigma = 0.01;
  double point_dropout = 0.1;
  std::size_t target_points = 4096;
};

// Similarity map applied by preprocessing: x -> rotation * (x - centroid) / scale.
struct SimilarityTransform {
  Tensor rotation;   // (3,3)
  Tensor centroid;   // (3)
  double scale = 1.0;

  SimilarityTransform();
  Tensor apply(const Tensor& points) const;
  GraspPose apply(const GraspPose& pose) const;
};

struct PreprocessResult {
  ObjectCloud cloud;
  SimilarityTransform transform;
};

// Mean centering, unit-sphere scaling, random rotation, jitter, point
// dropout, then resampling to exactly target_points rows, in that order.
// Deterministic given the rng state.
PreprocessResult preprocess_with_transform(const ObjectCloud& cloud, const PreprocessConfig& config, Rng& rng);
ObjectCloud preprocess(const ObjectCloud& cloud, const PreprocessConfig& config, Rng& rng);

// Flat binary point matrix: 16-byte header (magic "PCLD", version, rows,
// cols as little-endian u32) followed by row-major float32 values.
void write_pcld(const std::string& path, const Tensor& points);
Tensor read_pcld(const std::string& path);

double max_pairwise_distance_error(const Tensor& a, const Tensor& b);

}  // namespace tog::geom
