#include "sclab/constraints/constraints.hpp"

#include <Eigen/Eigenvalues>
#include <fstream>

#include <json.hpp>

#include "sclab/error.hpp"
#include "sclab/geom/grid_subsample.hpp"
#include "sclab/geom/kdtree.hpp"
#include "sclab/io/ply.hpp"

namespace sclab::constraints {

using geom::OrientedPointCloud;
using geom::PointCloud;
using geom::Vec3;

PcaNormalResult estimate_normals_pca(const PointCloud& cloud, const PcaNormalConfig& cfg) {
  if (cfg.k < 3) throw DataError("PCA neighborhood size must be >= 3");
  if (cloud.size() < cfg.k) throw DataError("point cloud smaller than PCA neighborhood");

  const geom::KdTree3d tree(cloud.points);
  PcaNormalResult result;
  result.cloud.points = cloud.points;
  result.cloud.normals.resize(cloud.size(), 3);
  result.reliable.assign(cloud.size(), 1);

  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const auto nbrs = tree.knn(cloud.points.row(i).transpose(), cfg.k);
    Vec3 mean = Vec3::Zero();
    for (const Eigen::Index j : nbrs) mean += cloud.points.row(j).transpose();
    mean /= static_cast<double>(nbrs.size());
    geom::Mat3 cov = geom::Mat3::Zero();
    for (const Eigen::Index j : nbrs) {
      const Vec3 d = cloud.points.row(j).transpose() - mean;
      cov += d * d.transpose();
    }
    cov /= static_cast<double>(nbrs.size());

    Eigen::SelfAdjointEigenSolver<geom::Mat3> eig(cov);
    const Vec3 lambda = eig.eigenvalues();  // ascending
    // Rank < 2: the middle eigenvalue vanishes (collinear or coincident points).
    if (!(lambda[2] > 0.0) || lambda[1] <= 1e-9 * lambda[2]) {
      result.cloud.normals.row(i) = Vec3(0, 0, 1);
      result.reliable[i] = 0;
      continue;
    }
    result.cloud.normals.row(i) = eig.eigenvectors().col(0).normalized();
  }
  return result;
}

OrientedPointCloud orient_normals_toward_camera(const OrientedPointCloud& scan,
                                                const Vec3& camera_position) {
  OrientedPointCloud out = scan;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const Vec3 to_camera = camera_position - out.points.row(i).transpose();
    if (out.normals.row(i).dot(to_camera) < 0.0) out.normals.row(i) = -out.normals.row(i);
  }
  return out;
}

ConstraintSet generate_constraints(const OrientedPointCloud& scan, double delta,
                                   double resolution) {
  if (delta < 0.0) throw DataError("constraint delta must be nonnegative");
  if (resolution <= 0.0) throw DataError("constraint resolution must be positive");
  ConstraintSet set;
  set.delta = delta;
  set.resolution = resolution;
  if (scan.empty()) return set;
  geom::validate(scan);

  PointCloud free_shell, occ_shell;
  free_shell.points = scan.points + delta * scan.normals;
  occ_shell.points = scan.points - delta * scan.normals;
  set.free_points = geom::grid_subsample(free_shell, resolution);
  set.occ_points = geom::grid_subsample(occ_shell, resolution);
  return set;
}

void save_constraints(const std::string& prefix, const ConstraintSet& set) {
  io::write_point_cloud_ply(prefix + "_free.ply", set.free_points);
  io::write_point_cloud_ply(prefix + "_occ.ply", set.occ_points);
  nlohmann::json meta = {{"delta", set.delta}, {"resolution", set.resolution}};
  std::ofstream out(prefix + "_meta.json");
  if (!out) throw DataError(prefix + "_meta.json: cannot open file for writing");
  out << meta.dump(2) << "\n";
}

ConstraintSet load_constraints(const std::string& prefix) {
  ConstraintSet set;
  set.free_points.points = io::read_point_cloud_ply(prefix + "_free.ply").points;
  set.occ_points.points = io::read_point_cloud_ply(prefix + "_occ.ply").points;
  std::ifstream in(prefix + "_meta.json");
  if (!in) throw DataError(prefix + "_meta.json: cannot open file");
  nlohmann::json meta;
  try {
    in >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(prefix + "_meta.json: " + e.what());
  }
  set.delta = meta.at("delta");
  set.resolution = meta.at("resolution");
  return set;
}

}  // namespace sclab::constraints
