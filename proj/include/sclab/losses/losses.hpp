#pragma once

#include <array>

#include "sclab/geom/types.hpp"

namespace sclab::losses {

using geom::PointMatrix;
using geom::Vec3;

/// Symmetric Chamfer distance: mean-of-min squared distances in both
/// directions, summed.
double chamfer(const Eigen::Ref<const PointMatrix>& p, const Eigen::Ref<const PointMatrix>& q);

/// Mean over P of the min squared distance to Q (one direction only).
double one_sided_chamfer(const Eigen::Ref<const PointMatrix>& p,
                         const Eigen::Ref<const PointMatrix>& q);

/// Max over P of the min Euclidean (unsquared) distance to Q.
double uhd(const Eigen::Ref<const PointMatrix>& p, const Eigen::Ref<const PointMatrix>& q);

/// Mean of (1 - n_pred . n_gt); range [0, 2] for unit inputs.
double normal_cosine_loss(const Eigen::Ref<const PointMatrix>& n_pred,
                          const Eigen::Ref<const PointMatrix>& n_gt);

struct ChamferGradients {
  double value = 0.0;
  PointMatrix d_p, d_q;
};

/// Chamfer with gradients w.r.t. both clouds; nearest-neighbor assignments
/// are held fixed (subgradient of the min).
ChamferGradients chamfer_with_grad(const Eigen::Ref<const PointMatrix>& p,
                                   const Eigen::Ref<const PointMatrix>& q);

struct OneSidedGradients {
  double value = 0.0;
  PointMatrix d_q;  // gradient w.r.t. the target side Q
};

/// One-sided Chamfer P->Q with the gradient w.r.t. Q only (P is data).
OneSidedGradients one_sided_chamfer_grad_target(const Eigen::Ref<const PointMatrix>& p,
                                                const Eigen::Ref<const PointMatrix>& q);

struct LossWeights {
  double lambda_c = 1.0;
  double lambda_p = 1.0;
  double lambda_o = 1.0;
  double lambda_n = 1e-2;
};

/// Predicted completion pyramid: four coordinate levels (level 0 is the Patch
/// Seed set; each level doubles the previous one), unit normals for the
/// densest level, and the predicted object center.
struct CompletionLevels {
  std::array<PointMatrix, 4> levels;
  PointMatrix normals;  // |levels[3]| x 3
  Vec3 center = Vec3::Zero();
};

struct TotalLossResult {
  double value = 0.0;
  std::array<PointMatrix, 4> d_levels;
  Vec3 d_center = Vec3::Zero();
  PointMatrix d_normals;
};

/// Composite objective:
///   sum_j lambda_c * CD(C_j, Cgt_j) + sum_j lambda_p * OCD(partial, C_j)
///   + lambda_o * MSE(O, O_gt) + lambda_n * mean(1 - cos)
/// with analytic gradients w.r.t. every predicted quantity. The center MSE
/// averages over the 3 components.
TotalLossResult total_loss(const CompletionLevels& pred,
                           const std::array<PointMatrix, 4>& gt_levels,
                           const Eigen::Ref<const PointMatrix>& partial, const Vec3& center_gt,
                           const Eigen::Ref<const PointMatrix>& normals_gt,
                           const LossWeights& w = {});

}  // namespace sclab::losses
