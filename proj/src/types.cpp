#include "sclab/geom/types.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

namespace sclab::geom {

void validate(const PointCloud& cloud) {
  if (!cloud.points.allFinite()) throw DataError("point cloud contains non-finite coordinates");
}

void validate(const OrientedPointCloud& cloud, double normal_tol) {
  if (!cloud.points.allFinite()) throw DataError("point cloud contains non-finite coordinates");
  if (cloud.normals.rows() != cloud.points.rows())
    throw DataError("normal count does not match point count");
  if (cloud.has_labels() && static_cast<Eigen::Index>(cloud.labels.size()) != cloud.points.rows())
    throw DataError("label count does not match point count");
  for (Eigen::Index i = 0; i < cloud.normals.rows(); ++i) {
    if (std::abs(cloud.normals.row(i).norm() - 1.0) > normal_tol)
      throw DataError("normal " + std::to_string(i) + " is not unit length");
  }
}

void validate(const TriangleMesh& mesh) {
  if (!mesh.vertices.allFinite()) throw DataError("mesh contains non-finite vertices");
  for (Eigen::Index f = 0; f < mesh.triangle_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const int v = mesh.triangles(f, k);
      if (v < 0 || v >= mesh.vertex_count())
        throw DataError("triangle " + std::to_string(f) + " references missing vertex");
    }
    const Vec3 a = mesh.vertices.row(mesh.triangles(f, 0));
    const Vec3 b = mesh.vertices.row(mesh.triangles(f, 1));
    const Vec3 c = mesh.vertices.row(mesh.triangles(f, 2));
    if (triangle_area(a, b, c) <= 1e-12)
      throw DataError("triangle " + std::to_string(f) + " is degenerate");
  }
  if (mesh.watertight && !is_watertight(mesh))
    throw DataError("mesh marked watertight has boundary or non-manifold edges");
}

bool is_watertight(const TriangleMesh& mesh) {
  if (mesh.triangle_count() == 0) return false;
  std::map<std::pair<int, int>, int> edge_use;
  for (Eigen::Index f = 0; f < mesh.triangle_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      int a = mesh.triangles(f, k);
      int b = mesh.triangles(f, (k + 1) % 3);
      if (a > b) std::swap(a, b);
      ++edge_use[{a, b}];
    }
  }
  for (const auto& [edge, count] : edge_use) {
    if (count != 2) return false;
  }
  return true;
}

void update_watertight_flag(TriangleMesh& mesh) { mesh.watertight = is_watertight(mesh); }

}  // namespace sclab::geom
