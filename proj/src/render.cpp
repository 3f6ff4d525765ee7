#include "sclab/synth/render.hpp"

#include <cmath>

#include "sclab/error.hpp"
#include "sclab/geom/grid_subsample.hpp"
#include "sclab/io/image.hpp"
#include "sclab/io/ply.hpp"
#include "sclab/parallel.hpp"

namespace sclab::synth {

using geom::Vec3;

SceneGeometry::SceneGeometry(const layout::WorldScene& world)
    : background_(world.background) {
  objects_.reserve(world.objects.size());
  for (const auto& mesh : world.objects)
    objects_.push_back(std::make_unique<geom::TriangleBvh3d>(mesh));
}

int32_t SceneGeometry::cast(const Vec3& origin, const Vec3& dir, double& t, Vec3& point,
                            Vec3& normal) const {
  int32_t instance = geom::kMissLabel;
  t = std::numeric_limits<double>::infinity();
  if (const auto hit = background_.ray_cast(origin, dir)) {
    t = hit->t;
    point = hit->point;
    normal = hit->normal;
    instance = geom::kBackgroundLabel;
  }
  for (std::size_t j = 0; j < objects_.size(); ++j) {
    if (const auto hit = objects_[j]->ray_cast(origin, dir)) {
      if (hit->t < t) {
        t = hit->t;
        point = hit->point;
        normal = hit->normal;
        instance = static_cast<int32_t>(j);
      }
    }
  }
  return instance;
}

RenderedView render_view(const SceneGeometry& scene, const Camera& camera, int threads) {
  validate(camera);
  RenderedView view;
  view.width = camera.width;
  view.height = camera.height;
  const std::size_t pixels = static_cast<std::size_t>(camera.width) * camera.height;
  view.depth.assign(pixels, 0.0);
  view.instance.assign(pixels, geom::kMissLabel);
  view.normals = geom::PointMatrix::Zero(static_cast<Eigen::Index>(pixels), 3);

  parallel_for(camera.height, threads, [&](std::ptrdiff_t row_begin, std::ptrdiff_t row_end) {
    for (std::ptrdiff_t iy = row_begin; iy < row_end; ++iy) {
      for (int ix = 0; ix < camera.width; ++ix) {
        const double u = ix + 0.5, v = static_cast<double>(iy) + 0.5;
        const Vec3 dir_cam = camera.pixel_direction_camera(u, v);
        const Vec3 dir_world = camera.rotation * dir_cam;
        double t;
        Vec3 point, normal;
        const int32_t instance = scene.cast(camera.position, dir_world, t, point, normal);
        if (instance == geom::kMissLabel) continue;
        const std::size_t pix = view.pixel_index(ix, static_cast<int>(iy));
        view.depth[pix] = t * dir_cam.z();  // z-depth, not ray length
        view.instance[pix] = instance;
        if (normal.dot(camera.position - point) < 0.0) normal = -normal;
        view.normals.row(static_cast<Eigen::Index>(pix)) = normal;
      }
    }
  });
  return view;
}

FusedScan backproject_and_fuse(const std::vector<RenderedView>& views,
                               const std::vector<Camera>& cameras, double resolution) {
  if (views.size() != cameras.size()) throw DataError("view count does not match camera count");

  geom::OrientedPointCloud merged;
  std::vector<std::pair<int, std::size_t>> provenance;
  std::size_t total = 0;
  for (const RenderedView& view : views) {
    for (const double d : view.depth) total += d > 0.0 ? 1 : 0;
  }
  merged.points.resize(total, 3);
  merged.normals.resize(total, 3);
  merged.labels.resize(total);
  provenance.reserve(total);

  Eigen::Index row = 0;
  for (std::size_t v = 0; v < views.size(); ++v) {
    const RenderedView& view = views[v];
    const Camera& camera = cameras[v];
    for (int iy = 0; iy < view.height; ++iy) {
      for (int ix = 0; ix < view.width; ++ix) {
        const std::size_t pix = view.pixel_index(ix, iy);
        const double depth = view.depth[pix];
        if (depth <= 0.0) continue;
        merged.points.row(row) = camera.lift(ix + 0.5, iy + 0.5, depth);
        merged.normals.row(row) = view.normals.row(static_cast<Eigen::Index>(pix));
        merged.labels[row] = view.instance[pix];
        provenance.emplace_back(static_cast<int>(v), pix);
        ++row;
      }
    }
  }

  const auto kept = geom::grid_subsample_indices(merged.points, resolution);
  FusedScan fused;
  fused.cloud.points.resize(kept.size(), 3);
  fused.cloud.normals.resize(kept.size(), 3);
  fused.cloud.labels.resize(kept.size());
  fused.provenance.resize(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    fused.cloud.points.row(i) = merged.points.row(kept[i]);
    fused.cloud.normals.row(i) = merged.normals.row(kept[i]);
    fused.cloud.labels[i] = merged.labels[kept[i]];
    fused.provenance[i] = provenance[kept[i]];
  }
  return fused;
}

void save_view(const std::string& prefix, const RenderedView& view, const Camera& camera) {
  std::vector<float> depth(view.depth.size());
  for (std::size_t i = 0; i < view.depth.size(); ++i) depth[i] = static_cast<float>(view.depth[i]);
  io::write_pfm(prefix + "_depth.pfm", view.width, view.height, depth);

  std::vector<uint16_t> instance(view.instance.size());
  for (std::size_t i = 0; i < view.instance.size(); ++i)
    instance[i] = static_cast<uint16_t>(view.instance[i] + 2);
  io::write_png16(prefix + "_instance.png", view.width, view.height, instance);

  geom::OrientedPointCloud lifted;
  std::size_t valid = 0;
  for (const double d : view.depth) valid += d > 0.0 ? 1 : 0;
  lifted.points.resize(valid, 3);
  lifted.normals.resize(valid, 3);
  lifted.labels.resize(valid);
  Eigen::Index row = 0;
  for (int iy = 0; iy < view.height; ++iy) {
    for (int ix = 0; ix < view.width; ++ix) {
      const std::size_t pix = view.pixel_index(ix, iy);
      if (view.depth[pix] <= 0.0) continue;
      lifted.points.row(row) = camera.lift(ix + 0.5, iy + 0.5, view.depth[pix]);
      lifted.normals.row(row) = view.normals.row(static_cast<Eigen::Index>(pix));
      lifted.labels[row] = view.instance[pix];
      ++row;
    }
  }
  io::write_point_cloud_ply(prefix + "_points.ply", lifted);
}

}  // namespace sclab::synth
