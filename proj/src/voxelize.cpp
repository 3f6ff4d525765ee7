#include "sclab/geom/voxelize.hpp"

#include "sclab/error.hpp"

namespace sclab::geom {

VoxelGrid voxelize_on_lattice(const MeshSdf& sdf, const Vec3& origin, const Eigen::Vector3i& dims,
                              double voxel_size) {
  if (voxel_size <= 0.0) throw DataError("voxel size must be positive");
  VoxelGrid grid;
  grid.origin = origin;
  grid.voxel_size = voxel_size;
  grid.dims = dims;
  grid.occupancy.assign(static_cast<std::size_t>(dims.x()) * dims.y() * dims.z(), false);
  for (int k = 0; k < dims.z(); ++k) {
    for (int j = 0; j < dims.y(); ++j) {
      for (int i = 0; i < dims.x(); ++i) {
        const Vec3 center = grid.voxel_center(i, j, k);
        if (sdf.signed_distance(center) <= 0.0) grid.occupancy[grid.linear_index(i, j, k)] = true;
      }
    }
  }
  return grid;
}

VoxelGrid voxelize_solid(const TriangleMesh& mesh, double voxel_size) {
  if (voxel_size <= 0.0) throw DataError("voxel size must be positive");
  const MeshSdf sdf(mesh);
  const Aabb box = sdf.bounds();
  const Vec3 origin = box.min - Vec3::Constant(voxel_size);
  Eigen::Vector3i dims;
  for (int k = 0; k < 3; ++k) {
    dims[k] = static_cast<int>(std::ceil(box.extent()[k] / voxel_size)) + 2;
  }
  return voxelize_on_lattice(sdf, origin, dims, voxel_size);
}

}  // namespace sclab::geom
