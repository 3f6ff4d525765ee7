#pragma once

#include <Eigen/Geometry>
#include <map>
#include <string>
#include <vector>

#include "sclab/geom/types.hpp"

namespace sclab::layout {

/// Pose and per-axis scale of one object instance. Vertices map to world as
/// world = R * (scale .* v) + t.
struct ObjectPlacement {
  std::string id;
  std::string category;
  std::string mesh_ref;
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  geom::Vec3 translation = geom::Vec3::Zero();
  geom::Vec3 scale = geom::Vec3::Ones();
};

struct SceneLayout {
  geom::TriangleMesh background;
  std::string background_ref;
  std::vector<ObjectPlacement> objects;
  std::map<std::string, geom::TriangleMesh> mesh_library;

  const geom::TriangleMesh& mesh_of(const ObjectPlacement& placement) const;
};

geom::TriangleMesh transform_mesh(const geom::TriangleMesh& mesh, const ObjectPlacement& placement);

/// Background plus every object mesh baked into world coordinates.
struct WorldScene {
  geom::TriangleMesh background;
  std::vector<geom::TriangleMesh> objects;
};

WorldScene build_world(const SceneLayout& layout);

/// JSON schema: {background: path, objects: [{id, category, mesh,
/// rotation_wxyz, translation_xyz, scale_xyz}]}. Mesh paths are resolved
/// relative to the JSON file's directory.
SceneLayout load_layout(const std::string& json_path);
void save_layout(const std::string& json_path, const SceneLayout& layout);

}  // namespace sclab::layout
