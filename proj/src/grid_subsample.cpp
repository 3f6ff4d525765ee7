#include "sclab/geom/grid_subsample.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "sclab/error.hpp"

namespace sclab::geom {

namespace {

struct CellKey {
  int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const {
    uint64_t h = 1469598103934665603ull;
    for (uint64_t v : {static_cast<uint64_t>(k.x), static_cast<uint64_t>(k.y),
                       static_cast<uint64_t>(k.z)}) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

CellKey cell_of(const Eigen::Ref<const PointMatrix>& points, Eigen::Index i, double res) {
  return {static_cast<int64_t>(std::floor(points(i, 0) / res)),
          static_cast<int64_t>(std::floor(points(i, 1) / res)),
          static_cast<int64_t>(std::floor(points(i, 2) / res))};
}

}  // namespace

std::vector<Eigen::Index> grid_subsample_indices(const Eigen::Ref<const PointMatrix>& points,
                                                 double resolution) {
  if (resolution <= 0.0) throw DataError("subsample resolution must be positive");

  struct Slot {
    Eigen::Index order;  // position in the output
    Eigen::Index best;
    double best_d2;
  };
  std::unordered_map<CellKey, Slot, CellKeyHash> cells;
  cells.reserve(static_cast<std::size_t>(points.rows()));
  std::vector<Eigen::Index> kept;

  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const CellKey key = cell_of(points, i, resolution);
    const Vec3 centroid = resolution * Vec3(key.x + 0.5, key.y + 0.5, key.z + 0.5);
    const double d2 = (points.row(i).transpose() - centroid).squaredNorm();
    auto [it, inserted] = cells.try_emplace(key, Slot{static_cast<Eigen::Index>(kept.size()), i, d2});
    if (inserted) {
      kept.push_back(i);
    } else if (d2 < it->second.best_d2) {  // strict: ties keep the lower index
      it->second.best = i;
      it->second.best_d2 = d2;
      kept[it->second.order] = i;
    }
  }
  return kept;
}

PointCloud grid_subsample(const PointCloud& cloud, double resolution) {
  const auto kept = grid_subsample_indices(cloud.points, resolution);
  PointCloud out;
  out.points.resize(kept.size(), 3);
  for (std::size_t r = 0; r < kept.size(); ++r) out.points.row(r) = cloud.points.row(kept[r]);
  return out;
}

OrientedPointCloud grid_subsample(const OrientedPointCloud& cloud, double resolution) {
  const auto kept = grid_subsample_indices(cloud.points, resolution);
  OrientedPointCloud out;
  out.points.resize(kept.size(), 3);
  out.normals.resize(kept.size(), 3);
  if (cloud.has_labels()) out.labels.resize(kept.size());
  for (std::size_t r = 0; r < kept.size(); ++r) {
    out.points.row(r) = cloud.points.row(kept[r]);
    out.normals.row(r) = cloud.normals.row(kept[r]);
    if (cloud.has_labels()) out.labels[r] = cloud.labels[kept[r]];
  }
  return out;
}

std::size_t occupied_cell_count(const Eigen::Ref<const PointMatrix>& points, double resolution) {
  if (resolution <= 0.0) throw DataError("subsample resolution must be positive");
  std::unordered_map<CellKey, char, CellKeyHash> cells;
  for (Eigen::Index i = 0; i < points.rows(); ++i) cells.emplace(cell_of(points, i, resolution), 1);
  return cells.size();
}

}  // namespace sclab::geom
