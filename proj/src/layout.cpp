#include "sclab/layout/layout.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "sclab/error.hpp"
#include "sclab/io/obj.hpp"

namespace sclab::layout {

namespace fs = std::filesystem;
using geom::TriangleMesh;
using geom::Vec3;

const TriangleMesh& SceneLayout::mesh_of(const ObjectPlacement& placement) const {
  const auto it = mesh_library.find(placement.mesh_ref);
  if (it == mesh_library.end())
    throw DataError("layout references missing mesh '" + placement.mesh_ref + "'");
  return it->second;
}

TriangleMesh transform_mesh(const TriangleMesh& mesh, const ObjectPlacement& placement) {
  TriangleMesh out = mesh;
  const geom::Mat3 rot = placement.rotation.toRotationMatrix();
  for (Eigen::Index i = 0; i < out.vertex_count(); ++i) {
    const Vec3 scaled = placement.scale.cwiseProduct(mesh.vertices.row(i).transpose());
    out.vertices.row(i) = rot * scaled + placement.translation;
  }
  return out;
}

WorldScene build_world(const SceneLayout& layout) {
  WorldScene world;
  world.background = layout.background;
  world.objects.reserve(layout.objects.size());
  for (const ObjectPlacement& placement : layout.objects)
    world.objects.push_back(transform_mesh(layout.mesh_of(placement), placement));
  return world;
}

SceneLayout load_layout(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw DataError(json_path + ": cannot open file");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(json_path + ": " + e.what());
  }

  const fs::path base = fs::path(json_path).parent_path();
  auto resolve = [&](const std::string& ref) { return (base / ref).string(); };

  SceneLayout layout;
  try {
    layout.background_ref = doc.at("background");
    layout.background = io::read_mesh(resolve(layout.background_ref));
    for (const auto& obj : doc.at("objects")) {
      ObjectPlacement p;
      p.id = obj.at("id");
      p.category = obj.value("category", "");
      p.mesh_ref = obj.at("mesh");
      const auto& q = obj.at("rotation_wxyz");
      p.rotation = Eigen::Quaterniond(q.at(0), q.at(1), q.at(2), q.at(3)).normalized();
      const auto& t = obj.at("translation_xyz");
      p.translation = Vec3(t.at(0), t.at(1), t.at(2));
      const auto& s = obj.at("scale_xyz");
      p.scale = Vec3(s.at(0), s.at(1), s.at(2));
      if ((p.scale.array() <= 0.0).any())
        throw DataError(json_path + ": object '" + p.id + "' has non-positive scale");
      if (layout.mesh_library.find(p.mesh_ref) == layout.mesh_library.end())
        layout.mesh_library.emplace(p.mesh_ref, io::read_mesh(resolve(p.mesh_ref)));
      layout.objects.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(json_path + ": " + e.what());
  }

  if (!layout.background.watertight)
    throw DataError(json_path + ": background mesh is not watertight");
  for (const auto& [ref, mesh] : layout.mesh_library) {
    if (!mesh.watertight) throw DataError(json_path + ": mesh '" + ref + "' is not watertight");
  }
  return layout;
}

void save_layout(const std::string& json_path, const SceneLayout& layout) {
  nlohmann::json doc;
  doc["background"] = layout.background_ref;
  doc["objects"] = nlohmann::json::array();
  for (const ObjectPlacement& p : layout.objects) {
    doc["objects"].push_back(
        {{"id", p.id},
         {"category", p.category},
         {"mesh", p.mesh_ref},
         {"rotation_wxyz", {p.rotation.w(), p.rotation.x(), p.rotation.y(), p.rotation.z()}},
         {"translation_xyz", {p.translation.x(), p.translation.y(), p.translation.z()}},
         {"scale_xyz", {p.scale.x(), p.scale.y(), p.scale.z()}}});
  }
  std::ofstream out(json_path);
  if (!out) throw DataError(json_path + ": cannot open file for writing");
  out << doc.dump(2) << "\n";
}

}  // namespace sclab::layout
