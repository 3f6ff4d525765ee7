#pragma once

#include <vector>

#include "sclab/geom/types.hpp"

namespace sclab::geom {

/// Indices of the representative point of every occupied cell, in order of
/// first cell appearance. Cells come from the global lattice floor(p / res)
/// (the AABB-min anchor snapped onto the resolution lattice), which makes
/// re-subsampling at the same resolution exactly idempotent. The
/// representative is the input point closest to the cell centroid, ties
/// broken by lowest index.
std::vector<Eigen::Index> grid_subsample_indices(const Eigen::Ref<const PointMatrix>& points,
                                                 double resolution);

PointCloud grid_subsample(const PointCloud& cloud, double resolution);
OrientedPointCloud grid_subsample(const OrientedPointCloud& cloud, double resolution);

/// Number of occupied lattice cells at the given resolution.
std::size_t occupied_cell_count(const Eigen::Ref<const PointMatrix>& points, double resolution);

}  // namespace sclab::geom
