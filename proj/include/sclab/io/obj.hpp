#pragma once

#include <string>

#include "sclab/geom/types.hpp"

namespace sclab::io {

/// Reads vertices and faces from a Wavefront OBJ file; polygons are
/// fan-triangulated and the watertight flag is computed.
geom::TriangleMesh read_mesh_obj(const std::string& path);

/// Dispatches on the file extension (.obj / .ply).
geom::TriangleMesh read_mesh(const std::string& path);

}  // namespace sclab::io
