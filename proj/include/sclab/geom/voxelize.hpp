#pragma once

#include <cmath>

#include "sclab/geom/sdf.hpp"
#include "sclab/geom/types.hpp"

namespace sclab::geom {

/// Solid voxelization on an explicit lattice: voxel occupied iff the signed
/// distance at its center is <= 0.
VoxelGrid voxelize_on_lattice(const MeshSdf& sdf, const Vec3& origin, const Eigen::Vector3i& dims,
                              double voxel_size);

/// Solid voxelization of a watertight mesh. The grid covers the mesh AABB
/// padded by one voxel on every side.
VoxelGrid voxelize_solid(const TriangleMesh& mesh, double voxel_size);

}  // namespace sclab::geom
