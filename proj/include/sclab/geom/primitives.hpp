#pragma once

#include "sclab/geom/types.hpp"

namespace sclab::geom {

/// Axis-aligned box with outward-facing triangles.
TriangleMesh make_box(const Vec3& center, const Vec3& half_extents);

/// Icosphere with `subdivisions` refinement levels (0 = icosahedron).
TriangleMesh make_icosphere(const Vec3& center, double radius, int subdivisions);

/// Concave watertight solid: an L-shaped cross section in the xy plane
/// extruded along z. The L occupies [0,sx]x[0,sy] minus the upper-right
/// block starting at (ax, ay).
TriangleMesh make_lshape(double sx, double sy, double ax, double ay, double sz);

}  // namespace sclab::geom
