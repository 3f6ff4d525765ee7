#include "sclab/io/obj.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <vector>

#include "sclab/error.hpp"
#include "sclab/io/ply.hpp"

namespace sclab::io {

namespace {

// "7", "7/2", "7//3", "7/2/3" -> vertex index; negative values count from the end.
int parse_obj_index(const std::string& token, int vertex_count, const std::string& path) {
  const std::size_t slash = token.find('/');
  const std::string head = slash == std::string::npos ? token : token.substr(0, slash);
  int idx = std::stoi(head);
  if (idx < 0) idx = vertex_count + idx + 1;
  if (idx < 1 || idx > vertex_count) throw DataError(path + ": OBJ face index out of range");
  return idx - 1;
}

}  // namespace

geom::TriangleMesh read_mesh_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");

  std::vector<geom::Vec3> verts;
  std::vector<std::array<int, 3>> tris;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) throw DataError(path + ": malformed OBJ vertex");
      verts.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<int> face;
      std::string token;
      while (ls >> token)
        face.push_back(parse_obj_index(token, static_cast<int>(verts.size()), path));
      if (face.size() < 3) throw DataError(path + ": OBJ face with fewer than 3 vertices");
      for (std::size_t k = 1; k + 1 < face.size(); ++k)
        tris.push_back({face[0], face[k], face[k + 1]});
    }
  }

  geom::TriangleMesh mesh;
  mesh.vertices.resize(verts.size(), 3);
  for (std::size_t i = 0; i < verts.size(); ++i) mesh.vertices.row(i) = verts[i];
  mesh.triangles.resize(tris.size(), 3);
  for (std::size_t f = 0; f < tris.size(); ++f)
    for (int k = 0; k < 3; ++k) mesh.triangles(f, k) = tris[f][k];
  geom::update_watertight_flag(mesh);
  return mesh;
}

geom::TriangleMesh read_mesh(const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".obj") return read_mesh_obj(path);
  if (ext == ".ply") return read_mesh_ply(path);
  throw DataError(path + ": unsupported mesh format '" + ext + "'");
}

}  // namespace sclab::io
