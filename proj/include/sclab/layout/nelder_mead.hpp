#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace sclab::layout {

struct NelderMeadResult {
  Eigen::VectorXd best_x;
  double best_value = 0.0;
  std::size_t evaluations = 0;
  // Best objective seen after each accepted improvement; nonincreasing.
  std::vector<double> accepted_trace;
};

/// Derivative-free simplex minimization (Nelder-Mead, standard coefficients).
/// `step` sets the initial simplex spread per coordinate; coordinates with
/// step 0 are frozen at their initial value. Stops after `budget` objective
/// evaluations and returns the best point ever evaluated.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                             std::size_t budget);

}  // namespace sclab::layout
