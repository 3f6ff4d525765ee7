#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "sclab/error.hpp"
#include "sclab/geom/types.hpp"

namespace sclab::geom {

template <typename Scalar>
struct RayHit {
  Scalar t = std::numeric_limits<Scalar>::infinity();
  Eigen::Index triangle = -1;
  Eigen::Matrix<Scalar, 3, 1> point = Eigen::Matrix<Scalar, 3, 1>::Zero();
  Eigen::Matrix<Scalar, 3, 1> normal = Eigen::Matrix<Scalar, 3, 1>::Zero();
  // Barycentric margin of the hit: min(u, v, 1-u-v). Near-zero values mean
  // the ray grazed an edge or vertex and the crossing parity is unreliable.
  Scalar barycentric_margin = 0;
};

template <typename Scalar>
struct ClosestPoint {
  Scalar squared_distance = std::numeric_limits<Scalar>::infinity();
  Eigen::Index triangle = -1;
  Eigen::Matrix<Scalar, 3, 1> point = Eigen::Matrix<Scalar, 3, 1>::Zero();
};

/// Closest point on triangle (a,b,c) to p. Ericson, Real-Time Collision
/// Detection, 5.1.5.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> closest_point_on_triangle(const Eigen::Matrix<Scalar, 3, 1>& p,
                                                      const Eigen::Matrix<Scalar, 3, 1>& a,
                                                      const Eigen::Matrix<Scalar, 3, 1>& b,
                                                      const Eigen::Matrix<Scalar, 3, 1>& c) {
  using Vec = Eigen::Matrix<Scalar, 3, 1>;
  const Vec ab = b - a, ac = c - a, ap = p - a;
  const Scalar d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return a;

  const Vec bp = p - b;
  const Scalar d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return b;

  const Scalar vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) {
    const Scalar v = d1 / (d1 - d3);
    return a + v * ab;
  }

  const Vec cp = p - c;
  const Scalar d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return c;

  const Scalar vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) {
    const Scalar w = d2 / (d2 - d6);
    return a + w * ac;
  }

  const Scalar va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    const Scalar w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return b + w * (c - b);
  }

  const Scalar denom = Scalar(1) / (va + vb + vc);
  const Scalar v = vb * denom, w = vc * denom;
  return a + v * ab + w * ac;
}

/// Moller-Trumbore. Returns (t, u, v) on hit with t > t_min; hits with
/// |det| below the parallel threshold are treated as misses.
template <typename Scalar>
struct RayTriangleResult {
  bool hit = false;
  Scalar t = 0, u = 0, v = 0;
};

template <typename Scalar>
RayTriangleResult<Scalar> intersect_ray_triangle(const Eigen::Matrix<Scalar, 3, 1>& origin,
                                                 const Eigen::Matrix<Scalar, 3, 1>& dir,
                                                 const Eigen::Matrix<Scalar, 3, 1>& a,
                                                 const Eigen::Matrix<Scalar, 3, 1>& b,
                                                 const Eigen::Matrix<Scalar, 3, 1>& c,
                                                 Scalar t_min) {
  using Vec = Eigen::Matrix<Scalar, 3, 1>;
  RayTriangleResult<Scalar> out;
  const Vec e1 = b - a, e2 = c - a;
  const Vec pvec = dir.cross(e2);
  const Scalar det = e1.dot(pvec);
  if (std::abs(det) < Scalar(1e-14)) return out;
  const Scalar inv_det = Scalar(1) / det;
  const Vec tvec = origin - a;
  const Scalar u = tvec.dot(pvec) * inv_det;
  if (u < 0 || u > 1) return out;
  const Vec qvec = tvec.cross(e1);
  const Scalar v = dir.dot(qvec) * inv_det;
  if (v < 0 || u + v > 1) return out;
  const Scalar t = e2.dot(qvec) * inv_det;
  if (t <= t_min) return out;
  out.hit = true;
  out.t = t;
  out.u = u;
  out.v = v;
  return out;
}

/// Bounding-volume hierarchy over mesh triangles supporting nearest-hit ray
/// casts, all-hit collection, and closest-surface-point queries. Results are
/// identical to brute force over all triangles (ties by lowest triangle
/// index). Immutable after construction; concurrent reads are safe.
template <typename Scalar>
class TriangleBvh {
 public:
  using Vec = Eigen::Matrix<Scalar, 3, 1>;
  static constexpr Scalar kRayTmin = Scalar(1e-9);

  TriangleBvh() = default;

  TriangleBvh(const Eigen::Ref<const Points3<Scalar>>& vertices,
              const Eigen::Ref<const TriangleMatrix>& triangles)
      : vertices_(vertices), triangles_(triangles) {
    if (triangles_.rows() == 0) throw DataError("mesh has no triangles");
    order_.resize(triangles_.rows());
    std::iota(order_.begin(), order_.end(), Eigen::Index{0});
    centroids_.resize(triangles_.rows(), 3);
    boxes_.resize(triangles_.rows());
    for (Eigen::Index f = 0; f < triangles_.rows(); ++f) {
      Aabb box;
      for (int k = 0; k < 3; ++k) box.extend(vertices_.row(triangles_(f, k)).transpose().template cast<double>());
      boxes_[f] = box;
      centroids_.row(f) = ((vertices_.row(triangles_(f, 0)) + vertices_.row(triangles_(f, 1)) +
                            vertices_.row(triangles_(f, 2))) /
                           Scalar(3));
    }
    nodes_.reserve(2 * triangles_.rows() / kLeafSize + 2);
    root_ = build(0, triangles_.rows());
  }

  explicit TriangleBvh(const TriangleMesh& mesh)
      : TriangleBvh(mesh.vertices.template cast<Scalar>(), mesh.triangles) {}

  Eigen::Index triangle_count() const { return triangles_.rows(); }

  const Aabb& bounds() const { return nodes_[root_].box; }

  Vec triangle_vertex(Eigen::Index tri, int corner) const {
    return vertices_.row(triangles_(tri, corner)).transpose();
  }

  /// Nearest intersection with t > t_min, or nullopt on miss.
  std::optional<RayHit<Scalar>> ray_cast(const Vec& origin, const Vec& dir,
                                         Scalar t_min = kRayTmin) const {
    RayHit<Scalar> best;
    const Vec inv = dir.cwiseInverse();
    cast_recursive(root_, origin, dir, inv, t_min, best);
    if (best.triangle < 0) return std::nullopt;
    best.point = origin + best.t * dir;
    const Vec a = triangle_vertex(best.triangle, 0);
    const Vec b = triangle_vertex(best.triangle, 1);
    const Vec c = triangle_vertex(best.triangle, 2);
    best.normal = (b - a).cross(c - a).normalized();
    return best;
  }

  /// All intersections with t > t_min, unsorted.
  void ray_all_hits(const Vec& origin, const Vec& dir, std::vector<RayHit<Scalar>>& out,
                    Scalar t_min = kRayTmin) const {
    out.clear();
    const Vec inv = dir.cwiseInverse();
    all_hits_recursive(root_, origin, dir, inv, t_min, out);
  }

  ClosestPoint<Scalar> closest_point(const Vec& query) const {
    ClosestPoint<Scalar> best;
    closest_recursive(root_, query, best);
    return best;
  }

 private:
  static constexpr Eigen::Index kLeafSize = 4;

  struct Node {
    Aabb box;
    Eigen::Index begin = 0, end = 0;
    int left = -1, right = -1;
    bool leaf() const { return left < 0; }
  };

  int build(Eigen::Index begin, Eigen::Index end) {
    Node node;
    node.begin = begin;
    node.end = end;
    for (Eigen::Index i = begin; i < end; ++i) node.box.extend(boxes_[order_[i]]);
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin > kLeafSize) {
      Aabb cbox;
      for (Eigen::Index i = begin; i < end; ++i)
        cbox.extend(centroids_.row(order_[i]).transpose().template cast<double>());
      int axis = 0;
      cbox.extent().maxCoeff(&axis);
      const Eigen::Index mid = begin + (end - begin) / 2;
      std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                       [&](Eigen::Index a, Eigen::Index b) {
                         return centroids_(a, axis) < centroids_(b, axis);
                       });
      const int left = build(begin, mid);
      const int right = build(mid, end);
      nodes_[self].left = left;
      nodes_[self].right = right;
    }
    return self;
  }

  // Slab test against [t_min, t_max]; tolerant of infinities from zero
  // direction components.
  static bool ray_box(const Aabb& box, const Vec& origin, const Vec& inv, Scalar t_min,
                      Scalar t_max) {
    for (int k = 0; k < 3; ++k) {
      Scalar t0 = (Scalar(box.min[k]) - origin[k]) * inv[k];
      Scalar t1 = (Scalar(box.max[k]) - origin[k]) * inv[k];
      if (std::isnan(t0) || std::isnan(t1)) continue;  // origin on slab, dir parallel
      if (t0 > t1) std::swap(t0, t1);
      t_min = std::max(t_min, t0);
      t_max = std::min(t_max, t1);
      if (t_min > t_max) return false;
    }
    return true;
  }

  void cast_leaf(const Node& node, const Vec& origin, const Vec& dir, Scalar t_min,
                 RayHit<Scalar>& best) const {
    for (Eigen::Index i = node.begin; i < node.end; ++i) {
      const Eigen::Index tri = order_[i];
      const auto r = intersect_ray_triangle<Scalar>(origin, dir, triangle_vertex(tri, 0),
                                                    triangle_vertex(tri, 1),
                                                    triangle_vertex(tri, 2), t_min);
      if (!r.hit) continue;
      if (r.t < best.t || (r.t == best.t && tri < best.triangle)) {
        best.t = r.t;
        best.triangle = tri;
        best.barycentric_margin = std::min({r.u, r.v, Scalar(1) - r.u - r.v});
      }
    }
  }

  void cast_recursive(int node_id, const Vec& origin, const Vec& dir, const Vec& inv,
                      Scalar t_min, RayHit<Scalar>& best) const {
    const Node& node = nodes_[node_id];
    if (!ray_box(node.box, origin, inv, t_min, best.t)) return;
    if (node.leaf()) {
      cast_leaf(node, origin, dir, t_min, best);
      return;
    }
    cast_recursive(node.left, origin, dir, inv, t_min, best);
    cast_recursive(node.right, origin, dir, inv, t_min, best);
  }

  void all_hits_recursive(int node_id, const Vec& origin, const Vec& dir, const Vec& inv,
                          Scalar t_min, std::vector<RayHit<Scalar>>& out) const {
    const Node& node = nodes_[node_id];
    if (!ray_box(node.box, origin, inv, t_min, std::numeric_limits<Scalar>::infinity()))
      return;
    if (node.leaf()) {
      for (Eigen::Index i = node.begin; i < node.end; ++i) {
        const Eigen::Index tri = order_[i];
        const auto r = intersect_ray_triangle<Scalar>(origin, dir, triangle_vertex(tri, 0),
                                                      triangle_vertex(tri, 1),
                                                      triangle_vertex(tri, 2), t_min);
        if (!r.hit) continue;
        RayHit<Scalar> hit;
        hit.t = r.t;
        hit.triangle = tri;
        hit.barycentric_margin = std::min({r.u, r.v, Scalar(1) - r.u - r.v});
        out.push_back(hit);
      }
      return;
    }
    all_hits_recursive(node.left, origin, dir, inv, t_min, out);
    all_hits_recursive(node.right, origin, dir, inv, t_min, out);
  }

  static Scalar box_squared_distance(const Aabb& box, const Vec& p) {
    Scalar d2 = 0;
    for (int k = 0; k < 3; ++k) {
      const Scalar lo = Scalar(box.min[k]), hi = Scalar(box.max[k]);
      Scalar d = 0;
      if (p[k] < lo)
        d = lo - p[k];
      else if (p[k] > hi)
        d = p[k] - hi;
      d2 += d * d;
    }
    return d2;
  }

  void closest_recursive(int node_id, const Vec& query, ClosestPoint<Scalar>& best) const {
    const Node& node = nodes_[node_id];
    if (box_squared_distance(node.box, query) > best.squared_distance) return;
    if (node.leaf()) {
      for (Eigen::Index i = node.begin; i < node.end; ++i) {
        const Eigen::Index tri = order_[i];
        const Vec q = closest_point_on_triangle<Scalar>(query, triangle_vertex(tri, 0),
                                                        triangle_vertex(tri, 1),
                                                        triangle_vertex(tri, 2));
        const Scalar d2 = (q - query).squaredNorm();
        if (d2 < best.squared_distance ||
            (d2 == best.squared_distance && tri < best.triangle)) {
          best.squared_distance = d2;
          best.triangle = tri;
          best.point = q;
        }
      }
      return;
    }
    // Nearer child first for tighter pruning.
    const Scalar dl = box_squared_distance(nodes_[node.left].box, query);
    const Scalar dr = box_squared_distance(nodes_[node.right].box, query);
    if (dl <= dr) {
      closest_recursive(node.left, query, best);
      closest_recursive(node.right, query, best);
    } else {
      closest_recursive(node.right, query, best);
      closest_recursive(node.left, query, best);
    }
  }

  Points3<Scalar> vertices_;
  TriangleMatrix triangles_;
  Points3<Scalar> centroids_;
  std::vector<Aabb> boxes_;
  std::vector<Eigen::Index> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

using TriangleBvh3d = TriangleBvh<double>;

}  // namespace sclab::geom
