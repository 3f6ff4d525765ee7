#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cstdint>
#include <limits>
#include <vector>

#include "sclab/error.hpp"

namespace sclab::geom {

template <typename Scalar>
using Points3 = Eigen::Matrix<Scalar, Eigen::Dynamic, 3>;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using PointMatrix = Points3<double>;
using TriangleMatrix = Eigen::Matrix<int, Eigen::Dynamic, 3>;

/// Instance label of background-mesh surface points in fused scans.
inline constexpr int32_t kBackgroundLabel = -1;
/// Instance label of pixels that hit nothing.
inline constexpr int32_t kMissLabel = -2;

struct PointCloud {
  PointMatrix points;  // N x 3, meters

  Eigen::Index size() const { return points.rows(); }
  bool empty() const { return points.rows() == 0; }
};

/// Points with unit normals and optional per-point instance labels.
struct OrientedPointCloud {
  PointMatrix points;
  PointMatrix normals;
  std::vector<int32_t> labels;  // empty when unlabeled

  Eigen::Index size() const { return points.rows(); }
  bool empty() const { return points.rows() == 0; }
  bool has_labels() const { return !labels.empty(); }
  PointCloud positions() const { return PointCloud{points}; }
};

struct TriangleMesh {
  PointMatrix vertices;
  TriangleMatrix triangles;
  bool watertight = false;

  Eigen::Index vertex_count() const { return vertices.rows(); }
  Eigen::Index triangle_count() const { return triangles.rows(); }
};

/// Dense occupancy over a regular grid; voxel (i,j,k) spans
/// origin + [i,i+1)*voxel_size along x, etc. Storage is x-fastest.
struct VoxelGrid {
  Vec3 origin = Vec3::Zero();
  double voxel_size = 0.0;
  Eigen::Vector3i dims = Eigen::Vector3i::Zero();
  std::vector<bool> occupancy;

  std::size_t linear_index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims.x()) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims.y()) * k);
  }
  bool occupied(int i, int j, int k) const { return occupancy[linear_index(i, j, k)]; }
  Vec3 voxel_center(int i, int j, int k) const {
    return origin + voxel_size * Vec3(i + 0.5, j + 0.5, k + 0.5);
  }
  std::size_t occupied_count() const {
    std::size_t n = 0;
    for (bool b : occupancy) n += b ? 1 : 0;
    return n;
  }
};

struct Aabb {
  Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

  void extend(const Vec3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  void extend(const Aabb& b) {
    min = min.cwiseMin(b.min);
    max = max.cwiseMax(b.max);
  }
  bool valid() const { return (min.array() <= max.array()).all(); }
  Vec3 extent() const { return max - min; }
  Vec3 center() const { return 0.5 * (min + max); }
};

inline Aabb bounding_box(const Eigen::Ref<const PointMatrix>& points) {
  Aabb box;
  for (Eigen::Index i = 0; i < points.rows(); ++i) box.extend(points.row(i).transpose());
  return box;
}

inline double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

inline Vec3 triangle_normal(const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 n = (b - a).cross(c - a);
  double len = n.norm();
  return len > 0.0 ? Vec3(n / len) : Vec3(0, 0, 1);
}

void validate(const PointCloud& cloud);
void validate(const OrientedPointCloud& cloud, double normal_tol = 1e-6);
void validate(const TriangleMesh& mesh);

/// True iff every undirected edge is shared by exactly two triangles.
bool is_watertight(const TriangleMesh& mesh);

/// Computes and stores the watertight flag.
void update_watertight_flag(TriangleMesh& mesh);

}  // namespace sclab::geom
