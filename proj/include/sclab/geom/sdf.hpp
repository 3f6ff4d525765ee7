#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "sclab/error.hpp"
#include "sclab/geom/bvh.hpp"
#include "sclab/geom/types.hpp"

namespace sclab::geom {

/// Signed distance to a watertight mesh: negative inside. Magnitude is the
/// exact distance to the closest surface point (BVH query); the sign comes
/// from a majority vote of crossing parities along three axis-aligned rays.
/// Rays that graze an edge or vertex are perturbed by ~1e-7 and re-cast.
class MeshSdf {
 public:
  explicit MeshSdf(const TriangleMesh& mesh) : bvh_(mesh) {
    if (!mesh.watertight) throw DataError("sign undefined for open mesh");
  }

  const TriangleBvh3d& bvh() const { return bvh_; }
  const Aabb& bounds() const { return bvh_.bounds(); }

  double unsigned_distance(const Vec3& p) const {
    return std::sqrt(bvh_.closest_point(p).squared_distance);
  }

  /// -1 inside, +1 outside.
  int sign(const Vec3& p) const {
    // Everything strictly outside the root box is outside.
    const Aabb& box = bounds();
    if ((p.array() < box.min.array()).any() || (p.array() > box.max.array()).any()) return 1;

    static const std::array<Vec3, 3> axes = {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
    int inside_votes = 0;
    for (const Vec3& axis : axes) {
      int parity = cast_parity(p, axis);
      for (int attempt = 1; parity < 0 && attempt <= kMaxRetries; ++attempt) {
        parity = cast_parity(p, perturbed_direction(axis, attempt));
      }
      if (parity == 1) ++inside_votes;
    }
    return inside_votes >= 2 ? -1 : 1;
  }

  double signed_distance(const Vec3& p) const {
    const double d = unsigned_distance(p);
    if (d == 0.0) return 0.0;
    return sign(p) * d;
  }

 private:
  static constexpr int kMaxRetries = 8;
  static constexpr double kGrazeMargin = 1e-9;

  // Crossing parity along dir: 0 even (outside), 1 odd (inside), -1 unreliable.
  int cast_parity(const Vec3& p, const Vec3& dir) const {
    thread_local std::vector<RayHit<double>> hits;
    bvh_.ray_all_hits(p, dir, hits);
    for (const auto& h : hits) {
      if (h.barycentric_margin < kGrazeMargin) return -1;
    }
    return static_cast<int>(hits.size() % 2);
  }

  static Vec3 perturbed_direction(const Vec3& axis, int attempt) {
    // Deterministic off-axis nudges, growing slowly with the attempt count.
    const double eps = 1e-7 * attempt;
    const Vec3 nudge(eps * ((attempt % 3) + 1), eps * ((attempt % 5) + 2),
                     eps * ((attempt % 7) + 3));
    return (axis + nudge - axis.dot(nudge) * axis).normalized();
  }

  TriangleBvh3d bvh_;
};

}  // namespace sclab::geom
