#include "sclab/geom/surface_sampling.hpp"

#include <algorithm>
#include <cmath>

#include "sclab/error.hpp"
#include "sclab/rng.hpp"

namespace sclab::geom {

SurfaceSamples sample_surface_detailed(const TriangleMesh& mesh, Eigen::Index n, uint64_t seed) {
  if (n < 1) throw DataError("sample count must be >= 1");
  const Eigen::Index tri_count = mesh.triangle_count();
  if (tri_count == 0) throw DataError("mesh has no triangles");

  std::vector<double> cumulative(tri_count);
  double total = 0.0;
  for (Eigen::Index f = 0; f < tri_count; ++f) {
    const Vec3 a = mesh.vertices.row(mesh.triangles(f, 0));
    const Vec3 b = mesh.vertices.row(mesh.triangles(f, 1));
    const Vec3 c = mesh.vertices.row(mesh.triangles(f, 2));
    total += triangle_area(a, b, c);
    cumulative[f] = total;
  }
  if (!(total > 0.0)) throw DataError("mesh has zero surface area");

  SurfaceSamples out;
  out.points.resize(n, 3);
  out.normals.resize(n, 3);
  out.triangles.resize(n);
  Rng rng(seed);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = rng.uniform() * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const Eigen::Index f = std::min<Eigen::Index>(it - cumulative.begin(), tri_count - 1);
    const Vec3 a = mesh.vertices.row(mesh.triangles(f, 0));
    const Vec3 b = mesh.vertices.row(mesh.triangles(f, 1));
    const Vec3 c = mesh.vertices.row(mesh.triangles(f, 2));
    const double r1 = rng.uniform();
    const double r2 = rng.uniform();
    const double s = std::sqrt(r1);
    const Vec3 p = (1.0 - s) * a + s * (1.0 - r2) * b + s * r2 * c;
    out.points.row(i) = p;
    out.normals.row(i) = triangle_normal(a, b, c);
    out.triangles[i] = f;
  }
  return out;
}

PointCloud sample_surface(const TriangleMesh& mesh, Eigen::Index n, uint64_t seed) {
  return PointCloud{sample_surface_detailed(mesh, n, seed).points};
}

}  // namespace sclab::geom
