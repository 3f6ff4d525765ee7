#pragma once

#include <string>

#include "sclab/geom/types.hpp"

namespace sclab::io {

enum class PlyFormat { kBinaryLittleEndian, kAscii };

/// Writes x,y,z (+ nx,ny,nz when normals are present, + instance_id:int32
/// when labels are present) as double properties.
void write_point_cloud_ply(const std::string& path, const geom::OrientedPointCloud& cloud,
                           PlyFormat format = PlyFormat::kBinaryLittleEndian);
void write_point_cloud_ply(const std::string& path, const geom::PointCloud& cloud,
                           PlyFormat format = PlyFormat::kBinaryLittleEndian);

/// Reads a point cloud. Normals and labels are optional in the file; an
/// absent property leaves the corresponding field empty.
geom::OrientedPointCloud read_point_cloud_ply(const std::string& path);

void write_mesh_ply(const std::string& path, const geom::TriangleMesh& mesh,
                    PlyFormat format = PlyFormat::kBinaryLittleEndian);

/// Reads a triangle mesh from PLY; polygons are fan-triangulated. The
/// watertight flag is computed from the connectivity.
geom::TriangleMesh read_mesh_ply(const std::string& path);

}  // namespace sclab::io
