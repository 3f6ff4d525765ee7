#include "sclab/losses/losses.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "sclab/error.hpp"
#include "sclab/geom/kdtree.hpp"

namespace sclab::losses {

namespace {

using geom::KdTree3d;

void require_nonempty(const Eigen::Ref<const PointMatrix>& p,
                      const Eigen::Ref<const PointMatrix>& q) {
  if (p.rows() == 0 || q.rows() == 0) throw DataError("empty point set");
}

// Nearest index in `tree` for every row of `p`.
std::vector<Eigen::Index> nearest_indices(const Eigen::Ref<const PointMatrix>& p,
                                          const KdTree3d& tree) {
  std::vector<Eigen::Index> nn(p.rows());
  for (Eigen::Index i = 0; i < p.rows(); ++i) nn[i] = tree.nearest(p.row(i).transpose()).index;
  return nn;
}

}  // namespace

double one_sided_chamfer(const Eigen::Ref<const PointMatrix>& p,
                         const Eigen::Ref<const PointMatrix>& q) {
  require_nonempty(p, q);
  const KdTree3d tree(q);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    sum += tree.nearest(p.row(i).transpose()).squared_distance;
  return sum / static_cast<double>(p.rows());
}

double chamfer(const Eigen::Ref<const PointMatrix>& p, const Eigen::Ref<const PointMatrix>& q) {
  return one_sided_chamfer(p, q) + one_sided_chamfer(q, p);
}

double uhd(const Eigen::Ref<const PointMatrix>& p, const Eigen::Ref<const PointMatrix>& q) {
  require_nonempty(p, q);
  const KdTree3d tree(q);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    worst = std::max(worst, tree.nearest(p.row(i).transpose()).squared_distance);
  return std::sqrt(worst);
}

double normal_cosine_loss(const Eigen::Ref<const PointMatrix>& n_pred,
                          const Eigen::Ref<const PointMatrix>& n_gt) {
  if (n_pred.rows() != n_gt.rows())
    throw DataError("normal count mismatch: " + std::to_string(n_pred.rows()) + " vs " +
                    std::to_string(n_gt.rows()));
  if (n_pred.rows() == 0) throw DataError("empty normal set");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n_pred.rows(); ++i) sum += 1.0 - n_pred.row(i).dot(n_gt.row(i));
  return sum / static_cast<double>(n_pred.rows());
}

ChamferGradients chamfer_with_grad(const Eigen::Ref<const PointMatrix>& p,
                                   const Eigen::Ref<const PointMatrix>& q) {
  require_nonempty(p, q);
  const KdTree3d tree_q(q);
  const KdTree3d tree_p(p);
  const auto nn_pq = nearest_indices(p, tree_q);
  const auto nn_qp = nearest_indices(q, tree_p);

  ChamferGradients out;
  out.d_p = PointMatrix::Zero(p.rows(), 3);
  out.d_q = PointMatrix::Zero(q.rows(), 3);
  const double inv_p = 1.0 / static_cast<double>(p.rows());
  const double inv_q = 1.0 / static_cast<double>(q.rows());

  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const Vec3 diff = (p.row(i) - q.row(nn_pq[i])).transpose();
    out.value += inv_p * diff.squaredNorm();
    out.d_p.row(i) += (2.0 * inv_p) * diff.transpose();
    out.d_q.row(nn_pq[i]) -= (2.0 * inv_p) * diff.transpose();
  }
  for (Eigen::Index j = 0; j < q.rows(); ++j) {
    const Vec3 diff = (q.row(j) - p.row(nn_qp[j])).transpose();
    out.value += inv_q * diff.squaredNorm();
    out.d_q.row(j) += (2.0 * inv_q) * diff.transpose();
    out.d_p.row(nn_qp[j]) -= (2.0 * inv_q) * diff.transpose();
  }
  return out;
}

OneSidedGradients one_sided_chamfer_grad_target(const Eigen::Ref<const PointMatrix>& p,
                                                const Eigen::Ref<const PointMatrix>& q) {
  require_nonempty(p, q);
  const KdTree3d tree_q(q);
  OneSidedGradients out;
  out.d_q = PointMatrix::Zero(q.rows(), 3);
  const double inv_p = 1.0 / static_cast<double>(p.rows());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const auto nn = tree_q.nearest(p.row(i).transpose());
    const Vec3 diff = (p.row(i) - q.row(nn.index)).transpose();
    out.value += inv_p * diff.squaredNorm();
    out.d_q.row(nn.index) -= (2.0 * inv_p) * diff.transpose();
  }
  return out;
}

TotalLossResult total_loss(const CompletionLevels& pred,
                           const std::array<PointMatrix, 4>& gt_levels,
                           const Eigen::Ref<const PointMatrix>& partial, const Vec3& center_gt,
                           const Eigen::Ref<const PointMatrix>& normals_gt,
                           const LossWeights& w) {
  TotalLossResult out;
  for (int j = 0; j < 4; ++j) {
    if (pred.levels[j].rows() != gt_levels[j].rows())
      throw DataError("completion level " + std::to_string(j) + " cardinality mismatch: " +
                      std::to_string(pred.levels[j].rows()) + " vs " +
                      std::to_string(gt_levels[j].rows()));
  }
  if (pred.normals.rows() != pred.levels[3].rows())
    throw DataError("normal count does not match densest level");
  if (normals_gt.rows() != pred.normals.rows()) throw DataError("ground-truth normal count mismatch");

  for (int j = 0; j < 4; ++j) {
    auto cd = chamfer_with_grad(pred.levels[j], gt_levels[j]);
    auto ocd = one_sided_chamfer_grad_target(partial, pred.levels[j]);
    out.value += w.lambda_c * cd.value + w.lambda_p * ocd.value;
    out.d_levels[j] = w.lambda_c * cd.d_p + w.lambda_p * ocd.d_q;
  }

  const Vec3 center_diff = pred.center - center_gt;
  out.value += w.lambda_o * center_diff.squaredNorm() / 3.0;
  out.d_center = w.lambda_o * (2.0 / 3.0) * center_diff;

  out.value += w.lambda_n * normal_cosine_loss(pred.normals, normals_gt);
  out.d_normals = (-w.lambda_n / static_cast<double>(pred.normals.rows())) * normals_gt;
  return out;
}

}  // namespace sclab::losses
