#include "sclab/layout/nelder_mead.hpp"

#include <algorithm>
#include <numeric>

#include "sclab/error.hpp"

namespace sclab::layout {

namespace {

// Active coordinates (step != 0) are optimized; frozen ones pass through.
struct ActiveSpace {
  std::vector<int> active;
  Eigen::VectorXd x0;

  Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const {
    Eigen::VectorXd full = x0;
    for (std::size_t i = 0; i < active.size(); ++i) full[active[i]] = reduced[i];
    return full;
  }
  Eigen::VectorXd reduce(const Eigen::VectorXd& full) const {
    Eigen::VectorXd reduced(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) reduced[i] = full[active[i]];
    return reduced;
  }
};

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                             std::size_t budget) {
  if (budget < 1) throw DataError("optimizer budget must be >= 1");
  if (step.size() != x0.size()) throw DataError("step size does not match parameter count");

  ActiveSpace space;
  space.x0 = x0;
  for (Eigen::Index i = 0; i < step.size(); ++i)
    if (step[i] != 0.0) space.active.push_back(static_cast<int>(i));

  NelderMeadResult result;
  result.best_x = x0;

  auto eval = [&](const Eigen::VectorXd& reduced) {
    const double value = objective(space.expand(reduced));
    ++result.evaluations;
    if (result.evaluations == 1 || value < result.best_value) {
      result.best_value = value;
      result.best_x = space.expand(reduced);
      result.accepted_trace.push_back(value);
    }
    return value;
  };

  const int dim = static_cast<int>(space.active.size());
  if (dim == 0) {
    eval(Eigen::VectorXd(0));
    return result;
  }

  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

  std::vector<Eigen::VectorXd> simplex;
  std::vector<double> values;
  simplex.push_back(space.reduce(x0));
  values.push_back(eval(simplex[0]));
  for (int i = 0; i < dim && result.evaluations < budget; ++i) {
    Eigen::VectorXd v = simplex[0];
    v[i] += step[space.active[i]];
    simplex.push_back(v);
    values.push_back(eval(v));
  }
  while (static_cast<int>(simplex.size()) < dim + 1) {
    simplex.push_back(simplex.back());
    values.push_back(values.back());
  }

  std::vector<int> order(simplex.size());
  while (result.evaluations < budget) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });

    const int best = order[0];
    const int worst = order[dim];
    const int second_worst = order[dim - 1];

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i <= dim; ++i)
      if (i != worst) centroid += simplex[i];
    centroid /= static_cast<double>(dim);

    const Eigen::VectorXd reflected = centroid + kReflect * (centroid - simplex[worst]);
    const double f_reflected = eval(reflected);

    if (f_reflected < values[best]) {
      if (result.evaluations >= budget) break;
      const Eigen::VectorXd expanded = centroid + kExpand * (reflected - centroid);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
    } else if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
    } else {
      if (result.evaluations >= budget) break;
      const Eigen::VectorXd contracted = centroid + kContract * (simplex[worst] - centroid);
      const double f_contracted = eval(contracted);
      if (f_contracted < values[worst]) {
        simplex[worst] = contracted;
        values[worst] = f_contracted;
      } else {
        for (int i = 0; i <= dim; ++i) {
          if (i == best) continue;
          simplex[i] = simplex[best] + kShrink * (simplex[i] - simplex[best]);
          if (result.evaluations >= budget) break;
          values[i] = eval(simplex[i]);
        }
      }
    }
  }
  return result;
}

}  // namespace sclab::layout
