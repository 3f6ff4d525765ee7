#pragma once

#include <cstdint>
#include <vector>

#include "sclab/geom/types.hpp"

namespace sclab::geom {

struct SurfaceSamples {
  PointMatrix points;             // n x 3
  PointMatrix normals;            // geometric normal of the source triangle
  std::vector<Eigen::Index> triangles;  // source triangle per sample
};

/// Samples n points triangle-area-proportionally with uniform barycentric
/// coordinates, deterministically for a given seed.
SurfaceSamples sample_surface_detailed(const TriangleMesh& mesh, Eigen::Index n, uint64_t seed);

PointCloud sample_surface(const TriangleMesh& mesh, Eigen::Index n, uint64_t seed);

}  // namespace sclab::geom
