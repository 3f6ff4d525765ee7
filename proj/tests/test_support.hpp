#pragma once

#include <Eigen/Core>
#include <limits>
#include <optional>
#include <vector>

#include "sclab/geom/bvh.hpp"
#include "sclab/geom/types.hpp"
#include "sclab/rng.hpp"

namespace sclab::test {

using geom::PointMatrix;
using geom::TriangleMesh;
using geom::Vec3;

inline PointMatrix random_cloud(Eigen::Index n, Rng& rng, double lo = -1.0, double hi = 1.0) {
  PointMatrix points(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) points.row(i) = rng.uniform_vec3(lo, hi);
  return points;
}

// O(N) scan oracle for nearest neighbors, lowest index on ties.
inline std::pair<Eigen::Index, double> brute_force_nearest(const PointMatrix& cloud,
                                                           const Vec3& query) {
  Eigen::Index best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < cloud.rows(); ++i) {
    const double d2 = (cloud.row(i).transpose() - query).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return {best, best_d2};
}

// All-triangle loop oracle for ray casting.
inline std::optional<double> brute_force_ray_t(const TriangleMesh& mesh, const Vec3& origin,
                                               const Vec3& dir, double t_min = 1e-9) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index f = 0; f < mesh.triangle_count(); ++f) {
    const Vec3 a = mesh.vertices.row(mesh.triangles(f, 0));
    const Vec3 b = mesh.vertices.row(mesh.triangles(f, 1));
    const Vec3 c = mesh.vertices.row(mesh.triangles(f, 2));
    const auto r = geom::intersect_ray_triangle<double>(origin, dir, a, b, c, t_min);
    if (r.hit && r.t < best) best = r.t;
  }
  if (!std::isfinite(best)) return std::nullopt;
  return best;
}

// All-triangle loop oracle for unsigned surface distance.
inline double brute_force_surface_distance(const TriangleMesh& mesh, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index f = 0; f < mesh.triangle_count(); ++f) {
    const Vec3 a = mesh.vertices.row(mesh.triangles(f, 0));
    const Vec3 b = mesh.vertices.row(mesh.triangles(f, 1));
    const Vec3 c = mesh.vertices.row(mesh.triangles(f, 2));
    const Vec3 q = geom::closest_point_on_triangle<double>(p, a, b, c);
    best = std::min(best, (q - p).squaredNorm());
  }
  return std::sqrt(best);
}

// Independent inside test: crossing parity along one random direction,
// counted over all triangles. Retries with a fresh direction when the ray
// grazes an edge.
inline bool brute_force_inside(const TriangleMesh& mesh, const Vec3& p, Rng& rng) {
  for (int attempt = 0; attempt < 32; ++attempt) {
    const Vec3 dir = rng.unit_vec3();
    std::size_t crossings = 0;
    bool clean = true;
    for (Eigen::Index f = 0; f < mesh.triangle_count() && clean; ++f) {
      const Vec3 a = mesh.vertices.row(mesh.triangles(f, 0));
      const Vec3 b = mesh.vertices.row(mesh.triangles(f, 1));
      const Vec3 c = mesh.vertices.row(mesh.triangles(f, 2));
      const auto r = geom::intersect_ray_triangle<double>(p, dir, a, b, c, 1e-9);
      if (!r.hit) continue;
      if (std::min({r.u, r.v, 1.0 - r.u - r.v}) < 1e-9) clean = false;
      ++crossings;
    }
    if (clean) return crossings % 2 == 1;
  }
  return false;  // unreachable for sane meshes
}

}  // namespace sclab::test
