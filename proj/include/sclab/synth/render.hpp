#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sclab/geom/bvh.hpp"
#include "sclab/layout/layout.hpp"
#include "sclab/synth/camera.hpp"

namespace sclab::synth {

/// One rendered viewpoint. depth holds z-depth in meters (0 = miss);
/// instance holds the owning object index, -1 for the background mesh and -2
/// for misses; normals are world-frame geometric normals flipped toward the
/// camera. All buffers are row-major.
struct RenderedView {
  int width = 0, height = 0;
  std::vector<double> depth;
  std::vector<int32_t> instance;
  geom::PointMatrix normals;  // (width*height) x 3; zero rows on miss

  std::size_t pixel_index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * width + ix;
  }
};

/// Ray-cast acceleration structures for one scene, reusable across views.
class SceneGeometry {
 public:
  explicit SceneGeometry(const layout::WorldScene& world);

  /// Nearest hit over background + objects. Returns instance id (-2 on miss)
  /// and fills t/point/normal on hit.
  int32_t cast(const geom::Vec3& origin, const geom::Vec3& dir, double& t, geom::Vec3& point,
               geom::Vec3& normal) const;

 private:
  geom::TriangleBvh3d background_;
  std::vector<std::unique_ptr<geom::TriangleBvh3d>> objects_;
};

/// Renders one primary ray per pixel through the pixel center.
RenderedView render_view(const SceneGeometry& scene, const Camera& camera, int threads = 1);

struct FusedScan {
  geom::OrientedPointCloud cloud;
  // (view index, pixel index) that produced each fused point.
  std::vector<std::pair<int, std::size_t>> provenance;
};

/// Lifts every valid pixel of every view into world space (normals carried
/// from the views), concatenates, and grid-subsamples at `resolution`.
FusedScan backproject_and_fuse(const std::vector<RenderedView>& views,
                               const std::vector<Camera>& cameras, double resolution = 0.02);

/// Writes <prefix>_depth.pfm, <prefix>_instance.png (16-bit, ids offset by
/// +2), and <prefix>_points.ply with the lifted labeled points of the view.
void save_view(const std::string& prefix, const RenderedView& view, const Camera& camera);

}  // namespace sclab::synth
