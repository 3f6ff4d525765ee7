#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <vector>

#include "sclab/error.hpp"
#include "sclab/geom/types.hpp"

namespace sclab::geom {

/// k-d tree over 3D points. Queries are exact: they return the same result a
/// brute-force scan would, with ties broken by the lowest point index.
/// Immutable after construction; concurrent reads are safe.
template <typename Scalar>
class KdTree {
 public:
  using Vec = Eigen::Matrix<Scalar, 3, 1>;

  struct Nearest {
    Eigen::Index index = -1;
    Scalar squared_distance = std::numeric_limits<Scalar>::infinity();
  };

  KdTree() = default;

  explicit KdTree(const Eigen::Ref<const Points3<Scalar>>& points) : points_(points) {
    if (points_.rows() == 0) throw DataError("empty point set");
    order_.resize(points_.rows());
    std::iota(order_.begin(), order_.end(), Eigen::Index{0});
    nodes_.reserve(2 * points_.rows() / kLeafSize + 2);
    root_ = build(0, points_.rows());
  }

  Eigen::Index size() const { return points_.rows(); }

  Nearest nearest(const Vec& query) const {
    Nearest best;
    search(root_, query, best);
    return best;
  }

  /// Indices of the k nearest points ordered by (squared distance, index).
  /// Returns fewer than k when the cloud is smaller.
  std::vector<Eigen::Index> knn(const Vec& query, int k) const {
    k = static_cast<int>(std::min<Eigen::Index>(k, points_.rows()));
    Heap heap;
    search_knn(root_, query, k, heap);
    std::vector<std::pair<Scalar, Eigen::Index>> items;
    items.reserve(heap.size());
    while (!heap.empty()) {
      items.push_back(heap.top());
      heap.pop();
    }
    std::sort(items.begin(), items.end());
    std::vector<Eigen::Index> out(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) out[i] = items[i].second;
    return out;
  }

 private:
  static constexpr Eigen::Index kLeafSize = 16;

  struct Node {
    Scalar split = 0;
    int axis = -1;  // -1 marks a leaf
    Eigen::Index begin = 0, end = 0;
    int left = -1, right = -1;
  };

  using Heap = std::priority_queue<std::pair<Scalar, Eigen::Index>>;

  int build(Eigen::Index begin, Eigen::Index end) {
    Node node;
    node.begin = begin;
    node.end = end;
    if (end - begin > kLeafSize) {
      Vec lo = Vec::Constant(std::numeric_limits<Scalar>::infinity());
      Vec hi = -lo;
      for (Eigen::Index i = begin; i < end; ++i) {
        const Vec p = points_.row(order_[i]).transpose();
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
      }
      int axis = 0;
      (hi - lo).maxCoeff(&axis);
      const Eigen::Index mid = begin + (end - begin) / 2;
      std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                       [&](Eigen::Index a, Eigen::Index b) {
                         return points_(a, axis) < points_(b, axis);
                       });
      node.axis = axis;
      node.split = points_(order_[mid], axis);
      const int self = static_cast<int>(nodes_.size());
      nodes_.push_back(node);
      const int left = build(begin, mid);
      const int right = build(mid, end);
      nodes_[self].left = left;
      nodes_[self].right = right;
      return self;
    }
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    return self;
  }

  void scan_leaf(const Node& node, const Vec& query, Nearest& best) const {
    for (Eigen::Index i = node.begin; i < node.end; ++i) {
      const Eigen::Index idx = order_[i];
      const Scalar d2 = (points_.row(idx).transpose() - query).squaredNorm();
      if (d2 < best.squared_distance ||
          (d2 == best.squared_distance && idx < best.index)) {
        best.squared_distance = d2;
        best.index = idx;
      }
    }
  }

  void search(int node_id, const Vec& query, Nearest& best) const {
    const Node& node = nodes_[node_id];
    if (node.axis < 0) {
      scan_leaf(node, query, best);
      return;
    }
    const Scalar diff = query[node.axis] - node.split;
    const int near = diff < 0 ? node.left : node.right;
    const int far = diff < 0 ? node.right : node.left;
    search(near, query, best);
    // <= so equal-distance candidates across the plane still get visited
    // (a lower index may live there).
    if (diff * diff <= best.squared_distance) search(far, query, best);
  }

  void push_candidate(Heap& heap, int k, Scalar d2, Eigen::Index idx) const {
    const std::pair<Scalar, Eigen::Index> item{d2, idx};
    if (static_cast<int>(heap.size()) < k) {
      heap.push(item);
    } else if (item < heap.top()) {
      heap.pop();
      heap.push(item);
    }
  }

  void search_knn(int node_id, const Vec& query, int k, Heap& heap) const {
    const Node& node = nodes_[node_id];
    if (node.axis < 0) {
      for (Eigen::Index i = node.begin; i < node.end; ++i) {
        const Eigen::Index idx = order_[i];
        const Scalar d2 = (points_.row(idx).transpose() - query).squaredNorm();
        push_candidate(heap, k, d2, idx);
      }
      return;
    }
    const Scalar diff = query[node.axis] - node.split;
    const int near = diff < 0 ? node.left : node.right;
    const int far = diff < 0 ? node.right : node.left;
    search_knn(near, query, k, heap);
    if (static_cast<int>(heap.size()) < k || diff * diff <= heap.top().first) {
      search_knn(far, query, k, heap);
    }
  }

  Points3<Scalar> points_;
  std::vector<Eigen::Index> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

using KdTree3d = KdTree<double>;

}  // namespace sclab::geom
