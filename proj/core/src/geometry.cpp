#include "tog/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "tog/errors.hpp"

namespace tog::geom {

namespace {

constexpr char kMagic[4] = {'P', 'C', 'L', 'D'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff), static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff), static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_f32(std::ostream& os, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  write_u32(os, bits);
}

float read_f32(std::istream& is) {
  const std::uint32_t bits = read_u32(is);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

}  // namespace

void ObjectCloud::validate() const {
  if (points.rank() != 2 || points.dim(1) != 3) throw ShapeMismatch("ObjectCloud: points must be (N,3)");
  if (points.dim(0) == 0) throw EmptyCloud("ObjectCloud: no points");
  if (!points.all_finite()) throw NumericError("ObjectCloud: non-finite coordinates");
}

GraspPose::GraspPose() : rotation({3, 3}), translation({3}) {
  for (std::size_t i = 0; i < 3; ++i) rotation.at(i, i) = 1.0;
}

GraspPose::GraspPose(Tensor r, Tensor t) : rotation(std::move(r)), translation(std::move(t)) { validate(); }

void GraspPose::validate() const {
  if (rotation.rank() != 2 || rotation.dim(0) != 3 || rotation.dim(1) != 3)
    throw ShapeMismatch("GraspPose: rotation must be (3,3)");
  if (translation.rank() != 1 || translation.dim(0) != 3)
    throw ShapeMismatch("GraspPose: translation must be (3)");
  if (!rotation.all_finite() || !translation.all_finite())
    throw NumericError("GraspPose: non-finite entries");
  Eigen::Matrix3d r = rotation.mat();
  const double ortho = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (ortho > 1e-6) throw NonOrthonormalRotation("GraspPose: R^T R deviates from identity");
  if (r.determinant() < 0.0) throw NonOrthonormalRotation("GraspPose: determinant is negative");
}

Tensor GraspPose::apply(const Tensor& points) const {
  if (points.rank() != 2 || points.dim(1) != 3) throw ShapeMismatch("GraspPose::apply: points must be (N,3)");
  Tensor out = points;
  out.mat() = points.mat() * rotation.mat().transpose();
  out.mat().rowwise() += translation.vec().transpose();
  return out;
}

GraspPose identity_pose() { return GraspPose(); }

Tensor random_rotation(Rng& rng) {
  double q[4];
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& qi : q) {
      qi = rng.normal();
      norm += qi * qi;
    }
    norm = std::sqrt(norm);
  } while (norm < 1e-12);
  const double w = q[0] / norm, x = q[1] / norm, y = q[2] / norm, z = q[3] / norm;
  Tensor r({3, 3});
  r.at(0, 0) = 1 - 2 * (y * y + z * z);
  r.at(0, 1) = 2 * (x * y - w * z);
  r.at(0, 2) = 2 * (x * z + w * y);
  r.at(1, 0) = 2 * (x * y + w * z);
  r.at(1, 1) = 1 - 2 * (x * x + z * z);
  r.at(1, 2) = 2 * (y * z - w * x);
  r.at(2, 0) = 2 * (x * z - w * y);
  r.at(2, 1) = 2 * (y * z + w * x);
  r.at(2, 2) = 1 - 2 * (x * x + y * y);
  return r;
}

Tensor control_points() {
  return Tensor::from_rows({
      {0.0, 0.0, -0.10},   // base
      {0.0, 0.0, -0.05},   // wrist
      {0.04, 0.0, 0.0},    // left finger root
      {-0.04, 0.0, 0.0},   // right finger root
      {0.04, 0.0, 0.05},   // left fingertip
      {-0.04, 0.0, 0.05},  // right fingertip
  });
}

Tensor transform_control_points(const GraspPose& pose) {
  pose.validate();
  return pose.apply(control_points());
}

JointCloud build_joint_cloud(const ObjectCloud& cloud, const GraspPose& pose) {
  return build_joint_cloud(cloud, transform_control_points(pose));
}

JointCloud build_joint_cloud(const ObjectCloud& cloud, const Tensor& gripper_points) {
  cloud.validate();
  if (gripper_points.rank() != 2 || gripper_points.dim(0) != 6 || gripper_points.dim(1) != 3)
    throw ShapeMismatch("build_joint_cloud: gripper points must be (6,3)");
  const std::size_t n = cloud.size();
  JointCloud joint{Tensor({n + 6, 4})};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < 3; ++c) joint.points.at(i, c) = cloud.points.at(i, c);
    joint.points.at(i, 3) = 0.0;
  }
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t c = 0; c < 3; ++c) joint.points.at(n + i, c) = gripper_points.at(i, c);
    joint.points.at(n + i, 3) = 1.0;
  }
  return joint;
}

SimilarityTransform::SimilarityTransform() : rotation({3, 3}), centroid({3}) {
  for (std::size_t i = 0; i < 3; ++i) rotation.at(i, i) = 1.0;
}

Tensor SimilarityTransform::apply(const Tensor& points) const {
  if (points.rank() != 2 || points.dim(1) != 3)
    throw ShapeMismatch("SimilarityTransform::apply: points must be (N,3)");
  Tensor out = points;
  out.mat().rowwise() -= centroid.vec().transpose();
  out.mat() *= 1.0 / scale;
  out.mat() = (rotation.mat() * out.mat().transpose()).transpose();
  return out;
}

GraspPose SimilarityTransform::apply(const GraspPose& pose) const {
  Tensor r({3, 3});
  r.mat() = rotation.mat() * pose.rotation.mat();
  Tensor t({3});
  t.vec() = rotation.mat() * ((pose.translation.vec() - centroid.vec()) / scale);
  return GraspPose(std::move(r), std::move(t));
}

PreprocessResult preprocess_with_transform(const ObjectCloud& cloud, const PreprocessConfig& config, Rng& rng) {
  cloud.validate();
  if (config.target_points == 0) throw InvalidInput("preprocess: target_points must be positive");
  PreprocessResult result;
  result.cloud.instance_id = cloud.instance_id;
  result.cloud.class_id = cloud.class_id;
  Tensor pts = cloud.points;
  const std::size_t n = pts.dim(0);

  if (config.mean_center) {
    Eigen::Vector3d centroid = pts.mat().colwise().mean();
    pts.mat().rowwise() -= centroid.transpose();
    result.transform.centroid.vec() = centroid;
  }
  if (config.scale_to_unit) {
    const double max_norm = pts.mat().rowwise().norm().maxCoeff();
    if (max_norm > 0.0) {
      pts.mat() /= max_norm;
      result.transform.scale = max_norm;
    }
  }
  if (config.random_rotate) {
    Tensor r = random_rotation(rng);
    pts.mat() = (r.mat() * pts.mat().transpose()).transpose();
    result.transform.rotation = std::move(r);
  }
  if (config.jitter_sigma > 0.0) {
    for (double& v : pts) v += rng.normal(0.0, config.jitter_sigma);
  }

  std::vector<std::size_t> kept;
  kept.reserve(n);
  if (config.point_dropout > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!rng.bernoulli(config.point_dropout)) kept.push_back(i);
    }
    if (kept.empty()) kept.push_back(0);
  } else {
    for (std::size_t i = 0; i < n; ++i) kept.push_back(i);
  }

  std::vector<std::size_t> rows;
  rows.reserve(config.target_points);
  if (kept.size() == config.target_points) {
    rows = kept;
  } else if (kept.size() > config.target_points) {
    std::vector<std::size_t> pool = kept;
    rng.shuffle(pool);
    rows.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(config.target_points));
  } else {
    rows = kept;
    while (rows.size() < config.target_points) {
      rows.push_back(kept[rng.uniform_index(kept.size())]);
    }
  }

  Tensor out({config.target_points, 3});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) out.at(i, c) = pts.at(rows[i], c);
  }
  result.cloud.points = std::move(out);
  return result;
}

ObjectCloud preprocess(const ObjectCloud& cloud, const PreprocessConfig& config, Rng& rng) {
  return preprocess_with_transform(cloud, config, rng).cloud;
}

void write_pcld(const std::string& path, const Tensor& points) {
  if (points.rank() != 2) throw ShapeMismatch("write_pcld: expected a rank-2 tensor");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("write_pcld: cannot open " + path);
  os.write(kMagic, 4);
  write_u32(os, kVersion);
  write_u32(os, static_cast<std::uint32_t>(points.dim(0)));
  write_u32(os, static_cast<std::uint32_t>(points.dim(1)));
  for (double v : points) write_f32(os, static_cast<float>(v));
  if (!os) throw IoError("write_pcld: write failed for " + path);
}

Tensor read_pcld(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("read_pcld: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw IoError("read_pcld: bad magic in " + path);
  const std::uint32_t version = read_u32(is);
  if (version != kVersion) throw IoError("read_pcld: unsupported version in " + path);
  const std::uint32_t rows = read_u32(is);
  const std::uint32_t cols = read_u32(is);
  Tensor out({rows, cols});
  for (double& v : out) v = static_cast<double>(read_f32(is));
  if (!is) throw IoError("read_pcld: truncated file " + path);
  return out;
}

double max_pairwise_distance_error(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b) || a.rank() != 2) throw ShapeMismatch("max_pairwise_distance_error: shape mismatch");
  const std::size_t n = a.dim(0);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double da = (a.mat().row(i) - a.mat().row(j)).norm();
      const double db = (b.mat().row(i) - b.mat().row(j)).norm();
      worst = std::max(worst, std::abs(da - db));
    }
  }
  return worst;
}

}  // namespace tog::geom
