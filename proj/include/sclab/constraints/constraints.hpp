#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sclab/geom/types.hpp"

namespace sclab::constraints {

struct PcaNormalConfig {
  int k = 16;  // neighborhood size, >= 3
};

struct PcaNormalResult {
  geom::OrientedPointCloud cloud;
  // False where the neighborhood covariance had rank < 2; those normals are
  // set to (0,0,1) but the points are kept.
  std::vector<uint8_t> reliable;
};

/// Per-point normal = eigenvector of the k-NN covariance with the smallest
/// eigenvalue. Orientation is arbitrary (+/-).
PcaNormalResult estimate_normals_pca(const geom::PointCloud& cloud, const PcaNormalConfig& cfg);

/// Flips each normal n at p so that n . (camera - p) >= 0; tangent normals
/// are left unchanged.
geom::OrientedPointCloud orient_normals_toward_camera(const geom::OrientedPointCloud& scan,
                                                      const geom::Vec3& camera_position);

/// Sparse free-space / occluded-space shells around a partial scan.
struct ConstraintSet {
  geom::PointCloud free_points;  // subsampled {p + delta * n}
  geom::PointCloud occ_points;   // subsampled {p - delta * n}
  double delta = 0.02;
  double resolution = 0.10;

  bool empty() const { return free_points.empty() && occ_points.empty(); }
};

/// Offsets the scan by +/- delta along its normals and subsamples each shell
/// independently at `resolution`. Scan normals must be unit length and
/// oriented toward free space.
ConstraintSet generate_constraints(const geom::OrientedPointCloud& scan, double delta = 0.02,
                                   double resolution = 0.10);

/// Two PLY files (<prefix>_free.ply, <prefix>_occ.ply) plus a JSON sidecar
/// <prefix>_meta.json holding {delta, resolution}.
void save_constraints(const std::string& prefix, const ConstraintSet& set);
ConstraintSet load_constraints(const std::string& prefix);

}  // namespace sclab::constraints
