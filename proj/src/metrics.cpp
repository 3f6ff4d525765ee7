#include "sclab/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "sclab/error.hpp"
#include "sclab/geom/bvh.hpp"
#include "sclab/geom/sdf.hpp"
#include "sclab/geom/surface_sampling.hpp"
#include "sclab/geom/voxelize.hpp"
#include "sclab/losses/losses.hpp"
#include "sclab/parallel.hpp"

namespace sclab::metrics {

using geom::MeshSdf;
using geom::PointCloud;
using geom::TriangleMesh;
using geom::Vec3;

CollisionResult collision_metric(const layout::WorldScene& scene,
                                 const std::vector<PointCloud>& completions, int threads) {
  const std::size_t n = scene.objects.size();
  if (completions.size() != n)
    throw DataError("completion count does not match object count");

  const MeshSdf background_sdf(scene.background);
  std::vector<std::unique_ptr<MeshSdf>> object_sdfs(n);
  for (std::size_t j = 0; j < n; ++j) object_sdfs[j] = std::make_unique<MeshSdf>(scene.objects[j]);

  CollisionResult result;
  result.per_object_col.assign(n, 0.0);
  result.per_object_pct.assign(n, 0.0);
  std::vector<std::size_t> violations(n, 0);

  parallel_for(static_cast<std::ptrdiff_t>(n), threads, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    for (std::ptrdiff_t i = begin; i < end; ++i) {
      const PointCloud& completion = completions[i];
      double penalty_sum = 0.0;
      std::size_t violating = 0;
      for (Eigen::Index r = 0; r < completion.size(); ++r) {
        const Vec3 p = completion.points.row(r).transpose();
        double contribution = std::min(0.0, -background_sdf.signed_distance(p));
        for (std::size_t j = 0; j < n; ++j) {
          if (static_cast<std::ptrdiff_t>(j) == i) continue;
          contribution += std::min(0.0, object_sdfs[j]->signed_distance(p));
        }
        penalty_sum += contribution;
        if (contribution < 0.0) ++violating;
      }
      if (completion.size() > 0) {
        result.per_object_col[i] = -penalty_sum / static_cast<double>(completion.size());
        result.per_object_pct[i] =
            100.0 * static_cast<double>(violating) / static_cast<double>(completion.size());
      }
      violations[i] = violating;
    }
  });

  std::size_t populated = 0, total_points = 0, total_violations = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (completions[i].empty()) continue;
    ++populated;
    result.col += result.per_object_col[i];
    total_points += static_cast<std::size_t>(completions[i].size());
    total_violations += violations[i];
  }
  if (populated > 0) result.col /= static_cast<double>(populated);
  if (total_points > 0)
    result.pct_col = 100.0 * static_cast<double>(total_violations) / static_cast<double>(total_points);
  return result;
}

double voxel_iou(const TriangleMesh& mesh_a, const TriangleMesh& mesh_b, const MetricConfig& cfg) {
  const MeshSdf sdf_a(mesh_a);
  const MeshSdf sdf_b(mesh_b);
  geom::Aabb box = sdf_a.bounds();
  box.extend(sdf_b.bounds());
  Eigen::Vector3i dims;
  for (int k = 0; k < 3; ++k)
    dims[k] = std::max(1, static_cast<int>(std::ceil(box.extent()[k] / cfg.voxel_size_iou)));

  const geom::VoxelGrid grid_a = voxelize_on_lattice(sdf_a, box.min, dims, cfg.voxel_size_iou);
  const geom::VoxelGrid grid_b = voxelize_on_lattice(sdf_b, box.min, dims, cfg.voxel_size_iou);
  std::size_t inter = 0, uni = 0;
  for (std::size_t v = 0; v < grid_a.occupancy.size(); ++v) {
    const bool a = grid_a.occupancy[v], b = grid_b.occupancy[v];
    inter += (a && b) ? 1 : 0;
    uni += (a || b) ? 1 : 0;
  }
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double pcr(const PointCloud& points, const TriangleMesh& mesh, const MetricConfig& cfg) {
  if (points.empty()) throw DataError("empty point set");
  const geom::TriangleBvh3d bvh(mesh);
  const double tau2 = cfg.tau_pcr * cfg.tau_pcr;
  Eigen::Index covered = 0;
  for (Eigen::Index i = 0; i < points.size(); ++i) {
    if (bvh.closest_point(points.points.row(i).transpose()).squared_distance < tau2) ++covered;
  }
  return static_cast<double>(covered) / static_cast<double>(points.size());
}

double mesh_completion(const TriangleMesh& gt, const TriangleMesh& pred, const MetricConfig& cfg,
                       uint64_t seed) {
  const PointCloud samples = geom::sample_surface(gt, cfg.completion_samples, seed);
  const geom::TriangleBvh3d bvh(pred);
  const double tau2 = cfg.tau_comp * cfg.tau_comp;
  Eigen::Index covered = 0;
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    if (bvh.closest_point(samples.points.row(i).transpose()).squared_distance <= tau2) ++covered;
  }
  return static_cast<double>(covered) / static_cast<double>(samples.size());
}

double mesh_accuracy(const TriangleMesh& gt, const TriangleMesh& pred, const MetricConfig& cfg,
                     uint64_t seed) {
  const PointCloud samples = geom::sample_surface(pred, cfg.accuracy_samples, seed);
  const geom::TriangleBvh3d bvh(gt);
  std::vector<double> distances(samples.size());
  for (Eigen::Index i = 0; i < samples.size(); ++i)
    distances[i] = std::sqrt(bvh.closest_point(samples.points.row(i).transpose()).squared_distance);
  std::sort(distances.begin(), distances.end());

  // Interpolated order statistic at the configured quantile.
  const double h = cfg.accuracy_quantile * static_cast<double>(distances.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, distances.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return distances[lo] + frac * (distances[hi] - distances[lo]);
}

namespace {

bool passes(double score, double threshold, MatchDirection dir) {
  return dir == MatchDirection::kHigherIsMatch ? score >= threshold : score <= threshold;
}

bool better(double a, double b, MatchDirection dir) {
  return dir == MatchDirection::kHigherIsMatch ? a > b : a < b;
}

}  // namespace

double average_precision_voc11(const std::vector<Detection>& detections,
                               const std::vector<GtObject>& gt, double threshold,
                               MatchDirection direction, const std::string& category) {
  std::vector<std::size_t> gt_of_category;
  for (std::size_t g = 0; g < gt.size(); ++g)
    if (gt[g].category == category) gt_of_category.push_back(g);
  if (gt_of_category.empty()) throw DataError("no ground truth of category '" + category + "'");

  std::vector<std::size_t> det_order;
  for (std::size_t d = 0; d < detections.size(); ++d)
    if (detections[d].category == category) det_order.push_back(d);
  std::stable_sort(det_order.begin(), det_order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].confidence > detections[b].confidence;
  });

  std::vector<bool> matched(gt.size(), false);
  std::vector<bool> is_tp;
  is_tp.reserve(det_order.size());
  for (const std::size_t d : det_order) {
    const Detection& det = detections[d];
    if (det.match_scores.size() != gt.size())
      throw DataError("detection score vector does not match ground-truth count");
    std::ptrdiff_t best = -1;
    for (const std::size_t g : gt_of_category) {
      if (matched[g]) continue;
      const double score = det.match_scores[g];
      if (!std::isfinite(score) || !passes(score, threshold, direction)) continue;
      if (best < 0 || better(score, det.match_scores[best], direction)) best = g;
    }
    if (best >= 0) {
      matched[best] = true;
      is_tp.push_back(true);
    } else {
      is_tp.push_back(false);
    }
  }

  const double n_gt = static_cast<double>(gt_of_category.size());
  std::vector<double> precision(is_tp.size()), recall(is_tp.size());
  double tp = 0.0;
  for (std::size_t k = 0; k < is_tp.size(); ++k) {
    if (is_tp[k]) tp += 1.0;
    precision[k] = tp / static_cast<double>(k + 1);
    recall[k] = tp / n_gt;
  }

  double ap = 0.0;
  for (int step = 0; step <= 10; ++step) {
    const double r = step / 10.0;
    double best_precision = 0.0;
    for (std::size_t k = 0; k < is_tp.size(); ++k) {
      if (recall[k] >= r - 1e-12) best_precision = std::max(best_precision, precision[k]);
    }
    ap += best_precision;
  }
  return ap / 11.0;
}

MapResult mean_average_precision_voc11(const std::vector<Detection>& detections,
                                       const std::vector<GtObject>& gt, double threshold,
                                       MatchDirection direction) {
  MapResult result;
  std::vector<std::string> categories;
  for (const GtObject& g : gt)
    if (std::find(categories.begin(), categories.end(), g.category) == categories.end())
      categories.push_back(g.category);
  std::sort(categories.begin(), categories.end());

  for (const std::string& category : categories)
    result.per_class[category] =
        average_precision_voc11(detections, gt, threshold, direction, category);
  if (!result.per_class.empty()) {
    for (const auto& [name, ap] : result.per_class) result.mean += ap;
    result.mean /= static_cast<double>(result.per_class.size());
  }
  return result;
}

MetricReport scene_report(const layout::SceneLayout& gt_layout,
                          const std::vector<TriangleMesh>& predictions,
                          const geom::OrientedPointCloud& partial_scan, const MetricConfig& cfg,
                          uint64_t seed, int threads) {
  const std::size_t n = gt_layout.objects.size();
  if (predictions.size() != n)
    throw DataError("prediction count (" + std::to_string(predictions.size()) +
                    ") does not match layout object count (" + std::to_string(n) + ")");

  const layout::WorldScene gt_world = build_world(gt_layout);

  // Foreground = scan points labeled with an instance id.
  std::vector<Eigen::Index> fg;
  for (Eigen::Index i = 0; i < partial_scan.size(); ++i) {
    if (!partial_scan.has_labels() || partial_scan.labels[i] >= 0) fg.push_back(i);
  }
  geom::PointMatrix scan_fg(fg.size(), 3);
  for (std::size_t i = 0; i < fg.size(); ++i) scan_fg.row(i) = partial_scan.points.row(fg[i]);

  MetricReport report;
  report.per_object_cd.assign(n, 0.0);
  report.per_object_iou.assign(n, 0.0);
  report.per_object_pcr.assign(n, std::numeric_limits<double>::quiet_NaN());

  std::vector<PointCloud> pred_scene_clouds(n), gt_scene_clouds(n);
  parallel_for(static_cast<std::ptrdiff_t>(n), threads, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    for (std::ptrdiff_t i = begin; i < end; ++i) {
      const uint64_t object_seed = seed * 1000003ull + static_cast<uint64_t>(i) * 7919ull;
      pred_scene_clouds[i] =
          geom::sample_surface(predictions[i], cfg.scene_samples_per_object, object_seed);
      gt_scene_clouds[i] =
          geom::sample_surface(gt_world.objects[i], cfg.scene_samples_per_object, object_seed + 1);

      const PointCloud pred_inst =
          geom::sample_surface(predictions[i], cfg.instance_samples_per_object, object_seed + 2);
      const PointCloud gt_inst = geom::sample_surface(
          gt_world.objects[i], cfg.instance_samples_per_object, object_seed + 3);
      report.per_object_cd[i] =
          cfg.scale_distance * losses::chamfer(pred_inst.points, gt_inst.points);
      report.per_object_iou[i] = voxel_iou(predictions[i], gt_world.objects[i], cfg);

      if (partial_scan.has_labels()) {
        std::vector<Eigen::Index> mine;
        for (Eigen::Index r = 0; r < partial_scan.size(); ++r)
          if (partial_scan.labels[r] == static_cast<int32_t>(i)) mine.push_back(r);
        if (!mine.empty()) {
          PointCloud object_points;
          object_points.points.resize(mine.size(), 3);
          for (std::size_t r = 0; r < mine.size(); ++r)
            object_points.points.row(r) = partial_scan.points.row(mine[r]);
          report.per_object_pcr[i] = pcr(object_points, predictions[i], cfg);
        }
      }
    }
  });

  geom::PointMatrix pred_all(static_cast<Eigen::Index>(n) * cfg.scene_samples_per_object, 3);
  geom::PointMatrix gt_all(static_cast<Eigen::Index>(n) * cfg.scene_samples_per_object, 3);
  for (std::size_t i = 0; i < n; ++i) {
    pred_all.middleRows(static_cast<Eigen::Index>(i) * cfg.scene_samples_per_object,
                        cfg.scene_samples_per_object) = pred_scene_clouds[i].points;
    gt_all.middleRows(static_cast<Eigen::Index>(i) * cfg.scene_samples_per_object,
                      cfg.scene_samples_per_object) = gt_scene_clouds[i].points;
  }

  report.cd = cfg.scale_distance * losses::chamfer(pred_all, gt_all);
  if (scan_fg.rows() > 0) {
    report.ocd = cfg.scale_distance * losses::one_sided_chamfer(scan_fg, pred_all);
    report.uhd = cfg.scale_distance * losses::uhd(scan_fg, pred_all);
  }

  layout::WorldScene pred_world;
  pred_world.background = gt_layout.background;
  pred_world.objects = predictions;
  const CollisionResult col = collision_metric(pred_world, pred_scene_clouds, threads);
  report.col = cfg.scale_col * col.col;
  report.pct_col = col.pct_col;
  report.per_object_col.resize(n);
  for (std::size_t i = 0; i < n; ++i) report.per_object_col[i] = cfg.scale_col * col.per_object_col[i];

  double iou_sum = 0.0, pcr_sum = 0.0;
  std::size_t pcr_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    iou_sum += report.per_object_iou[i];
    if (std::isfinite(report.per_object_pcr[i])) {
      pcr_sum += report.per_object_pcr[i];
      ++pcr_count;
    }
  }
  report.mean_iou = n > 0 ? iou_sum / static_cast<double>(n) : 0.0;
  report.mean_pcr = pcr_count > 0 ? pcr_sum / static_cast<double>(pcr_count) : 0.0;
  return report;
}

nlohmann::json to_json(const MetricReport& report) {
  nlohmann::json per_object = {{"cd", report.per_object_cd},
                               {"iou", report.per_object_iou},
                               {"pcr", report.per_object_pcr},
                               {"col", report.per_object_col}};
  return {{"uhd", report.uhd},     {"ocd", report.ocd},
          {"cd", report.cd},       {"col", report.col},
          {"pct_col", report.pct_col}, {"iou", report.mean_iou},
          {"pcr", report.mean_pcr},    {"per_object", per_object}};
}

nlohmann::json to_json(const MapResult& result, const std::string& metric_name, double threshold) {
  return {{"map", {{"metric", metric_name},
                   {"threshold", threshold},
                   {"per_class", result.per_class},
                   {"mean", result.mean}}}};
}

}  // namespace sclab::metrics
