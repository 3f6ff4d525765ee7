#include "sclab/layout/layout_opt.hpp"

#include <algorithm>
#include <cmath>

#include "sclab/error.hpp"
#include "sclab/geom/surface_sampling.hpp"
#include "sclab/layout/nelder_mead.hpp"

namespace sclab::layout {

using geom::MeshSdf;
using geom::PointCloud;
using geom::TriangleMesh;
using geom::Vec3;

PlacementContext::PlacementContext(const TriangleMesh& background,
                                   const std::vector<TriangleMesh>& placed_objects,
                                   const PointCloud& target, uint64_t seed,
                                   const LayoutObjectiveWeights& weights, int surface_samples)
    : background_sdf_(background),
      target_tree_(target.points),
      target_points_(target.points),
      weights_(weights),
      seed_(seed),
      surface_samples_(surface_samples) {
  if (target.empty()) throw DataError("empty target scan");
  placed_sdfs_.reserve(placed_objects.size());
  for (const TriangleMesh& mesh : placed_objects)
    placed_sdfs_.push_back(std::make_unique<MeshSdf>(mesh));
}

double PlacementContext::objective(const TriangleMesh& mesh, const ObjectPlacement& candidate,
                                   const ObjectPlacement& init) const {
  const TriangleMesh world_mesh = transform_mesh(mesh, candidate);
  const PointCloud samples = geom::sample_surface(world_mesh, surface_samples_, seed_);

  // Alignment: symmetric Chamfer between the object samples and the target.
  double align = 0.0;
  for (Eigen::Index i = 0; i < samples.size(); ++i)
    align += target_tree_.nearest(samples.points.row(i).transpose()).squared_distance;
  align /= static_cast<double>(samples.size());
  const geom::KdTree3d sample_tree(samples.points);
  double back = 0.0;
  for (Eigen::Index i = 0; i < target_points_.rows(); ++i)
    back += sample_tree.nearest(target_points_.row(i).transpose()).squared_distance;
  back /= static_cast<double>(target_points_.rows());
  align += back;

  // Collision: penetration into placed objects, or escape from the background.
  double collision = 0.0;
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    const Vec3 p = samples.points.row(i).transpose();
    double penalty = std::max(0.0, background_sdf_.signed_distance(p));
    for (const auto& sdf : placed_sdfs_) penalty += std::max(0.0, -sdf->signed_distance(p));
    collision += penalty;
  }
  collision /= static_cast<double>(samples.size());

  const double scale_penalty = (candidate.scale - init.scale).squaredNorm();

  // Floating: squared distance from the lowest-z 5% of samples to the
  // nearest scene surface; zero when the object rests on something.
  std::vector<double> z(samples.size());
  for (Eigen::Index i = 0; i < samples.size(); ++i) z[i] = samples.points(i, 2);
  const std::size_t bottom_count = std::max<std::size_t>(1, samples.size() / 20);
  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::nth_element(order.begin(), order.begin() + bottom_count - 1, order.end(),
                   [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });
  double floating = 0.0;
  for (std::size_t i = 0; i < bottom_count; ++i) {
    const Vec3 p = samples.points.row(static_cast<Eigen::Index>(order[i])).transpose();
    double d = background_sdf_.unsigned_distance(p);
    for (const auto& sdf : placed_sdfs_) d = std::min(d, sdf->unsigned_distance(p));
    floating += d * d;
  }
  floating /= static_cast<double>(bottom_count);

  return weights_.w_align * align + weights_.w_col * collision +
         weights_.w_scale * scale_penalty + weights_.w_floor * floating;
}

namespace {

ObjectPlacement placement_from_params(const ObjectPlacement& init, const Eigen::VectorXd& x) {
  ObjectPlacement out = init;
  const Vec3 axis_angle = x.segment<3>(0);
  const double angle = axis_angle.norm();
  Eigen::Quaterniond delta = Eigen::Quaterniond::Identity();
  if (angle > 1e-16) delta = Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis_angle / angle));
  out.rotation = (delta * init.rotation).normalized();
  out.translation = init.translation + x.segment<3>(3);
  out.scale = init.scale.cwiseProduct(x.segment<3>(6).array().exp().matrix());
  return out;
}

}  // namespace

OptimizePlacementResult optimize_placement(const TriangleMesh& mesh, const ObjectPlacement& init,
                                           const PlacementContext& context, std::size_t budget) {
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(10);
  Eigen::VectorXd step(10);
  step << 0.05, 0.05, 0.05,  // axis-angle delta (rad)
      0.05, 0.05, 0.05,      // translation delta (m)
      0.05, 0.05, 0.05,      // log-scale delta
      0.0;                   // reserved, frozen

  const auto nm = nelder_mead(
      [&](const Eigen::VectorXd& x) {
        return context.objective(mesh, placement_from_params(init, x), init);
      },
      x0, step, budget);

  OptimizePlacementResult result;
  result.placement = placement_from_params(init, nm.best_x);
  result.objective = nm.best_value;
  result.accepted_trace = nm.accepted_trace;
  return result;
}

VerifySceneResult verify_scene(const SceneLayout& layout, int samples_per_object, uint64_t seed) {
  const WorldScene world = build_world(layout);
  const MeshSdf background_sdf(world.background);
  std::vector<std::unique_ptr<MeshSdf>> object_sdfs;
  object_sdfs.reserve(world.objects.size());
  for (const TriangleMesh& mesh : world.objects)
    object_sdfs.push_back(std::make_unique<MeshSdf>(mesh));

  VerifySceneResult result;
  result.per_object_pct.assign(world.objects.size(), 0.0);
  std::size_t total = 0, violating_total = 0;
  for (std::size_t i = 0; i < world.objects.size(); ++i) {
    const PointCloud samples =
        geom::sample_surface(world.objects[i], samples_per_object, seed + i);
    std::size_t violating = 0;
    for (Eigen::Index r = 0; r < samples.size(); ++r) {
      const Vec3 p = samples.points.row(r).transpose();
      bool bad = background_sdf.signed_distance(p) > 1e-6;
      for (std::size_t j = 0; !bad && j < object_sdfs.size(); ++j) {
        if (i == j) continue;
        bad = object_sdfs[j]->signed_distance(p) < -1e-6;
      }
      violating += bad ? 1 : 0;
    }
    result.per_object_pct[i] =
        100.0 * static_cast<double>(violating) / static_cast<double>(samples.size());
    total += static_cast<std::size_t>(samples.size());
    violating_total += violating;
  }
  if (total > 0)
    result.pct_points_in_collision =
        100.0 * static_cast<double>(violating_total) / static_cast<double>(total);
  return result;
}

}  // namespace sclab::layout
