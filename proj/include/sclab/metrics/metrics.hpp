#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sclab/geom/types.hpp"
#include "sclab/layout/layout.hpp"

namespace sclab::metrics {

struct MetricConfig {
  double tau_pcr = 0.047;
  double voxel_size_iou = 0.047;
  double tau_comp = 0.01;
  double accuracy_quantile = 0.9;
  double scale_distance = 1e3;  // applied to UHD / OCD / CD in reports
  double scale_col = 1e4;       // applied to COL in reports
  // Sampling counts: per-object scene clouds, per-object instance CD, and
  // the two mesh-reconstruction metrics.
  int scene_samples_per_object = 2048;
  int instance_samples_per_object = 4096;
  int completion_samples = 1000;
  int accuracy_samples = 1000;
};

struct CollisionResult {
  double col = 0.0;      // unscaled mean penetration depth
  double pct_col = 0.0;  // percent of completion points with any violation
  std::vector<double> per_object_col;
  std::vector<double> per_object_pct;
};

/// Collision metric over predicted completions: each completion point is
/// penalized by how far it penetrates any *other* object mesh or extends
/// outside the background. Objects with empty completions are skipped in the
/// scene average.
CollisionResult collision_metric(const layout::WorldScene& scene,
                                 const std::vector<geom::PointCloud>& completions,
                                 int threads = 1);

/// IoU of solid voxelizations on a shared lattice anchored at the min corner
/// of the union AABB. Empty union is defined as 0.
double voxel_iou(const geom::TriangleMesh& mesh_a, const geom::TriangleMesh& mesh_b,
                 const MetricConfig& cfg = {});

/// Fraction of points whose distance to the mesh surface is < tau_pcr.
double pcr(const geom::PointCloud& points, const geom::TriangleMesh& mesh,
           const MetricConfig& cfg = {});

/// Fraction of points sampled on the ground-truth surface lying within
/// tau_comp of the predicted surface.
double mesh_completion(const geom::TriangleMesh& gt, const geom::TriangleMesh& pred,
                       const MetricConfig& cfg = {}, uint64_t seed = 0);

/// Distance threshold covering `accuracy_quantile` of points sampled on the
/// predicted surface (interpolated order statistics).
double mesh_accuracy(const geom::TriangleMesh& gt, const geom::TriangleMesh& pred,
                     const MetricConfig& cfg = {}, uint64_t seed = 0);

enum class MatchDirection { kHigherIsMatch, kLowerIsMatch };

struct Detection {
  std::string category;
  double confidence = 0.0;
  // Metric value against each ground-truth object (aligned with the GT list).
  std::vector<double> match_scores;
};

struct GtObject {
  std::string category;
};

/// PASCAL VOC 2007 11-point average precision for one category. Detections
/// are matched greedily in descending confidence to the best-scoring
/// unmatched GT of the same category that passes the threshold.
double average_precision_voc11(const std::vector<Detection>& detections,
                               const std::vector<GtObject>& gt, double threshold,
                               MatchDirection direction, const std::string& category);

struct MapResult {
  std::map<std::string, double> per_class;
  double mean = 0.0;
};

/// Mean AP over all categories that have at least one GT object.
MapResult mean_average_precision_voc11(const std::vector<Detection>& detections,
                                       const std::vector<GtObject>& gt, double threshold,
                                       MatchDirection direction);

struct MetricReport {
  double uhd = 0.0;       // x scale_distance
  double ocd = 0.0;       // x scale_distance
  double cd = 0.0;        // x scale_distance
  double col = 0.0;       // x scale_col
  double pct_col = 0.0;   // percent
  std::vector<double> per_object_cd;   // x scale_distance
  std::vector<double> per_object_iou;
  std::vector<double> per_object_pcr;
  std::vector<double> per_object_col;  // x scale_col
  double mean_iou = 0.0;
  double mean_pcr = 0.0;
};

/// Full scene evaluation of predicted meshes against a ground-truth layout
/// and labeled partial scan. UHD/OCD use the scan with background removed
/// (instance_id >= 0); CD compares per-object surface samplings; the scan
/// points of instance i drive that object's PCR.
MetricReport scene_report(const layout::SceneLayout& gt_layout,
                          const std::vector<geom::TriangleMesh>& predictions,
                          const geom::OrientedPointCloud& partial_scan,
                          const MetricConfig& cfg = {}, uint64_t seed = 0, int threads = 1);

nlohmann::json to_json(const MetricReport& report);
nlohmann::json to_json(const MapResult& result, const std::string& metric_name, double threshold);

}  // namespace sclab::metrics
