#include "sclab/geom/primitives.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace sclab::geom {

TriangleMesh make_box(const Vec3& center, const Vec3& half_extents) {
  TriangleMesh mesh;
  mesh.vertices.resize(8, 3);
  int row = 0;
  for (int dz : {-1, 1})
    for (int dy : {-1, 1})
      for (int dx : {-1, 1})
        mesh.vertices.row(row++) =
            center + Vec3(dx * half_extents.x(), dy * half_extents.y(), dz * half_extents.z());

  // Outward CCW winding; vertex order bit pattern is (z, y, x).
  static const int faces[12][3] = {
      {0, 2, 1}, {1, 2, 3},  // z-
      {4, 5, 6}, {5, 7, 6},  // z+
      {0, 1, 4}, {1, 5, 4},  // y-
      {2, 6, 3}, {3, 6, 7},  // y+
      {0, 4, 2}, {2, 4, 6},  // x-
      {1, 3, 5}, {3, 7, 5},  // x+
  };
  mesh.triangles.resize(12, 3);
  for (int f = 0; f < 12; ++f)
    for (int k = 0; k < 3; ++k) mesh.triangles(f, k) = faces[f][k];
  mesh.watertight = true;
  return mesh;
}

TriangleMesh make_icosphere(const Vec3& center, double radius, int subdivisions) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
  };
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };
  for (auto& v : verts) v.normalize();

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int idx = static_cast<int>(verts.size());
      verts.push_back((0.5 * (verts[a] + verts[b])).normalized());
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]);
      const int bc = mid(f[1], f[2]);
      const int ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  TriangleMesh mesh;
  mesh.vertices.resize(verts.size(), 3);
  for (std::size_t i = 0; i < verts.size(); ++i)
    mesh.vertices.row(i) = center + radius * verts[i];
  mesh.triangles.resize(faces.size(), 3);
  for (std::size_t f = 0; f < faces.size(); ++f)
    for (int k = 0; k < 3; ++k) mesh.triangles(f, k) = faces[f][k];
  mesh.watertight = true;
  return mesh;
}

TriangleMesh make_lshape(double sx, double sy, double ax, double ay, double sz) {
  // CCW L outline; the fan from the first corner stays inside this outline.
  const double poly[6][2] = {{0, 0}, {sx, 0}, {sx, ay}, {ax, ay}, {ax, sy}, {0, sy}};

  TriangleMesh mesh;
  mesh.vertices.resize(12, 3);
  for (int i = 0; i < 6; ++i) {
    mesh.vertices.row(i) = Vec3(poly[i][0], poly[i][1], 0.0);
    mesh.vertices.row(i + 6) = Vec3(poly[i][0], poly[i][1], sz);
  }

  std::vector<std::array<int, 3>> faces;
  for (int i = 1; i < 5; ++i) {
    faces.push_back({0, i + 1, i});          // bottom cap, faces -z
    faces.push_back({6, 6 + i, 6 + i + 1});  // top cap, faces +z
  }
  for (int i = 0; i < 6; ++i) {
    const int j = (i + 1) % 6;
    faces.push_back({i, j, j + 6});
    faces.push_back({i, j + 6, i + 6});
  }

  mesh.triangles.resize(faces.size(), 3);
  for (std::size_t f = 0; f < faces.size(); ++f)
    for (int k = 0; k < 3; ++k) mesh.triangles(f, k) = faces[f][k];
  mesh.watertight = true;
  return mesh;
}

}  // namespace sclab::geom
