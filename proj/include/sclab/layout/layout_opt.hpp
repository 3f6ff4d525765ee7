#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "sclab/geom/kdtree.hpp"
#include "sclab/geom/sdf.hpp"
#include "sclab/layout/layout.hpp"

namespace sclab::layout {

struct LayoutObjectiveWeights {
  double w_align = 1.0;
  double w_col = 10.0;
  double w_scale = 1.0;
  double w_floor = 1.0;
};

/// Frozen view of the scene one object is optimized against: the background
/// plus every already-placed object, with prebuilt SDFs and the target scan
/// index.
class PlacementContext {
 public:
  PlacementContext(const geom::TriangleMesh& background,
                   const std::vector<geom::TriangleMesh>& placed_objects,
                   const geom::PointCloud& target, uint64_t seed,
                   const LayoutObjectiveWeights& weights = {}, int surface_samples = 1024);

  /// Sum of alignment (Chamfer to target), collision, scale-deviation, and
  /// floating penalties for a candidate placement of `mesh`.
  double objective(const geom::TriangleMesh& mesh, const ObjectPlacement& candidate,
                   const ObjectPlacement& init) const;

  const LayoutObjectiveWeights& weights() const { return weights_; }

 private:
  geom::MeshSdf background_sdf_;
  std::vector<std::unique_ptr<geom::MeshSdf>> placed_sdfs_;
  geom::KdTree3d target_tree_;
  geom::PointMatrix target_points_;
  LayoutObjectiveWeights weights_;
  uint64_t seed_;
  int surface_samples_;
};

struct OptimizePlacementResult {
  ObjectPlacement placement;
  double objective = 0.0;
  std::vector<double> accepted_trace;  // nonincreasing
};

/// Nelder-Mead over 10 parameters: axis-angle rotation delta (3), translation
/// delta (3), log-scale delta (3), plus one reserved coordinate kept frozen.
/// Never returns a placement worse than `init`.
OptimizePlacementResult optimize_placement(const geom::TriangleMesh& mesh,
                                           const ObjectPlacement& init,
                                           const PlacementContext& context, std::size_t budget);

struct VerifySceneResult {
  double pct_points_in_collision = 0.0;
  std::vector<double> per_object_pct;
};

/// Samples each object's surface and counts points inside another object
/// (SDF < -1e-6) or outside the background (SDF > 1e-6).
VerifySceneResult verify_scene(const SceneLayout& layout, int samples_per_object, uint64_t seed);

}  // namespace sclab::layout
