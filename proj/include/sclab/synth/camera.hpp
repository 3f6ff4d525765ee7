#pragma once

#include <string>
#include <vector>

#include "sclab/geom/types.hpp"

namespace sclab::synth {

/// Pinhole camera. Rays leave along +z in the camera frame: pixel (u,v) maps
/// to direction ((u-cx)/fx, (v-cy)/fy, 1), normalized, then rotated to world.
struct Camera {
  double fx = 0, fy = 0, cx = 0, cy = 0;
  int width = 0, height = 0;
  geom::Mat3 rotation = geom::Mat3::Identity();  // world_from_camera
  geom::Vec3 position = geom::Vec3::Zero();

  geom::Vec3 pixel_direction_camera(double u, double v) const {
    return geom::Vec3((u - cx) / fx, (v - cy) / fy, 1.0).normalized();
  }
  geom::Vec3 pixel_direction_world(double u, double v) const {
    return rotation * pixel_direction_camera(u, v);
  }
  /// Lifts pixel (u,v) at z-depth `depth` into world coordinates.
  geom::Vec3 lift(double u, double v, double depth) const {
    const geom::Vec3 p_cam(depth * (u - cx) / fx, depth * (v - cy) / fy, depth);
    return rotation * p_cam + position;
  }
};

void validate(const Camera& camera);

/// JSON schema: {fx, fy, cx, cy, width, height, world_from_camera: 16
/// row-major floats}.
std::vector<Camera> load_cameras(const std::string& json_path);
void save_cameras(const std::string& json_path, const std::vector<Camera>& cameras);

/// Cameras on a horizontal ring looking at `target`; used for synthetic orbit
/// trajectories.
std::vector<Camera> orbit_cameras(const geom::Vec3& target, double radius, double height,
                                  int count, int width, int height_px, double focal_px);

}  // namespace sclab::synth
