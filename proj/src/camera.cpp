#include "sclab/synth/camera.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "sclab/error.hpp"

namespace sclab::synth {

using geom::Mat3;
using geom::Vec3;

void validate(const Camera& camera) {
  if (camera.fx <= 0 || camera.fy <= 0) throw DataError("camera focal lengths must be positive");
  if (camera.width <= 0 || camera.height <= 0) throw DataError("camera image size must be positive");
  const Mat3 should_be_identity = camera.rotation.transpose() * camera.rotation;
  if ((should_be_identity - Mat3::Identity()).norm() > 1e-9)
    throw DataError("camera rotation is not orthonormal");
}

std::vector<Camera> load_cameras(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw DataError(json_path + ": cannot open file");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(json_path + ": " + e.what());
  }

  std::vector<Camera> cameras;
  try {
    for (const auto& entry : doc.at("cameras")) {
      Camera cam;
      cam.fx = entry.at("fx");
      cam.fy = entry.at("fy");
      cam.cx = entry.at("cx");
      cam.cy = entry.at("cy");
      cam.width = entry.at("width");
      cam.height = entry.at("height");
      const auto& m = entry.at("world_from_camera");
      if (m.size() != 16) throw DataError(json_path + ": world_from_camera must have 16 entries");
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) cam.rotation(r, c) = m.at(4 * r + c);
        cam.position[r] = m.at(4 * r + 3);
      }
      validate(cam);
      cameras.push_back(cam);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(json_path + ": " + e.what());
  }
  return cameras;
}

void save_cameras(const std::string& json_path, const std::vector<Camera>& cameras) {
  nlohmann::json doc;
  doc["cameras"] = nlohmann::json::array();
  for (const Camera& cam : cameras) {
    std::vector<double> m(16, 0.0);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m[4 * r + c] = cam.rotation(r, c);
      m[4 * r + 3] = cam.position[r];
    }
    m[15] = 1.0;
    doc["cameras"].push_back({{"fx", cam.fx},
                              {"fy", cam.fy},
                              {"cx", cam.cx},
                              {"cy", cam.cy},
                              {"width", cam.width},
                              {"height", cam.height},
                              {"world_from_camera", m}});
  }
  std::ofstream out(json_path);
  if (!out) throw DataError(json_path + ": cannot open file for writing");
  out << doc.dump(2) << "\n";
}

std::vector<Camera> orbit_cameras(const Vec3& target, double radius, double height, int count,
                                  int width, int height_px, double focal_px) {
  std::vector<Camera> cameras;
  cameras.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double angle = 2.0 * M_PI * i / count;
    Camera cam;
    cam.fx = cam.fy = focal_px;
    cam.cx = width / 2.0;
    cam.cy = height_px / 2.0;
    cam.width = width;
    cam.height = height_px;
    cam.position = target + Vec3(radius * std::cos(angle), radius * std::sin(angle), height);

    const Vec3 forward = (target - cam.position).normalized();
    Vec3 right = forward.cross(Vec3(0, 0, 1));
    if (right.norm() < 1e-9) right = Vec3(1, 0, 0);  // looking straight down
    right.normalize();
    const Vec3 down = forward.cross(right);
    cam.rotation.col(0) = right;
    cam.rotation.col(1) = down;
    cam.rotation.col(2) = forward;
    cameras.push_back(cam);
  }
  return cameras;
}

}  // namespace sclab::synth
