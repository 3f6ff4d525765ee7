#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sclab/losses/losses.hpp"
#include "test_support.hpp"

using namespace sclab;
using namespace sclab::losses;
using geom::PointMatrix;
using geom::Vec3;
using test::random_cloud;

namespace {

PointMatrix single(const Vec3& p) {
  PointMatrix m(1, 3);
  m.row(0) = p;
  return m;
}

double brute_one_sided(const PointMatrix& p, const PointMatrix& q) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < q.rows(); ++j)
      best = std::min(best, (p.row(i) - q.row(j)).squaredNorm());
    sum += best;
  }
  return sum / static_cast<double>(p.rows());
}

struct RandomInstance {
  CompletionLevels pred;
  std::array<PointMatrix, 4> gt;
  PointMatrix partial;
  Vec3 center_gt;
  PointMatrix normals_gt;
};

RandomInstance make_instance(uint64_t seed, Eigen::Index base = 6) {
  Rng rng(seed);
  RandomInstance inst;
  for (int j = 0; j < 4; ++j) {
    const Eigen::Index n = base << j;
    inst.pred.levels[j] = random_cloud(n, rng);
    inst.gt[j] = random_cloud(n, rng);
  }
  inst.partial = random_cloud(base * 2, rng);
  inst.pred.center = rng.uniform_vec3(-1, 1);
  inst.center_gt = rng.uniform_vec3(-1, 1);
  const Eigen::Index dense = base << 3;
  inst.pred.normals.resize(dense, 3);
  inst.normals_gt.resize(dense, 3);
  for (Eigen::Index i = 0; i < dense; ++i) {
    inst.pred.normals.row(i) = rng.unit_vec3();
    inst.normals_gt.row(i) = rng.unit_vec3();
  }
  return inst;
}

}  // namespace

TEST_CASE("chamfer closed forms") {
  CHECK(chamfer(single({0, 0, 0}), single({1, 0, 0})) == doctest::Approx(2.0));
  Rng rng(3);
  const PointMatrix p = random_cloud(40, rng);
  CHECK(chamfer(p, p) == 0.0);
  CHECK_THROWS_AS(chamfer(p, PointMatrix(0, 3)), DataError);
}

TEST_CASE("one-sided chamfer closed forms") {
  CHECK(one_sided_chamfer(single({0, 0, 0}), single({3, 4, 0})) == doctest::Approx(25.0));
  Rng rng(5);
  const PointMatrix q = random_cloud(50, rng);
  const PointMatrix subset = q.topRows(20);
  CHECK(one_sided_chamfer(subset, q) == 0.0);
}

TEST_CASE("one-sided sums to symmetric chamfer") {
  Rng rng(7);
  const PointMatrix p = random_cloud(120, rng);
  const PointMatrix q = random_cloud(80, rng);
  CHECK(one_sided_chamfer(p, q) + one_sided_chamfer(q, p) ==
        doctest::Approx(chamfer(p, q)).epsilon(1e-15));
}

TEST_CASE("kernel oracle equivalence on random clouds") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform_index(500));
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.uniform_index(500));
    const PointMatrix p = random_cloud(n, rng);
    const PointMatrix q = random_cloud(m, rng);
    const double brute = brute_one_sided(p, q) + brute_one_sided(q, p);
    CHECK(chamfer(p, q) == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("uhd closed forms and order statistics") {
  Rng rng(13);
  const PointMatrix p = random_cloud(60, rng);
  CHECK(uhd(p, p) == 0.0);

  PointMatrix a(2, 3);
  a << 0, 0, 0, 2, 0, 0;
  CHECK(uhd(a, single({0, 0, 0})) == doctest::Approx(2.0));

  // uhd equals the square root of the largest per-point term of the OCD sum.
  const PointMatrix q = random_cloud(40, rng);
  double max_term = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < q.rows(); ++j)
      best = std::min(best, (p.row(i) - q.row(j)).squaredNorm());
    max_term = std::max(max_term, best);
  }
  CHECK(uhd(p, q) == doctest::Approx(std::sqrt(max_term)).epsilon(1e-12));
}

TEST_CASE("normal cosine loss closed forms") {
  PointMatrix n(2, 3);
  n << 1, 0, 0, 0, 1, 0;
  CHECK(normal_cosine_loss(n, n) == doctest::Approx(0.0));
  CHECK(normal_cosine_loss(n, -n) == doctest::Approx(2.0));
  PointMatrix orth(2, 3);
  orth << 0, 0, 1, 0, 0, 1;
  CHECK(normal_cosine_loss(n, orth) == doctest::Approx(1.0));
  CHECK_THROWS_AS(normal_cosine_loss(n, orth.topRows(1)), DataError);
}

TEST_CASE("kernels are translation invariant and scale as expected") {
  Rng rng(17);
  const PointMatrix p = random_cloud(70, rng);
  const PointMatrix q = random_cloud(55, rng);
  const Vec3 t(0.5, -1.25, 2.0);  // exactly representable
  const PointMatrix pt = p.rowwise() + t.transpose();
  const PointMatrix qt = q.rowwise() + t.transpose();
  CHECK(chamfer(pt, qt) == chamfer(p, q));
  CHECK(one_sided_chamfer(pt, qt) == one_sided_chamfer(p, q));
  CHECK(uhd(pt, qt) == uhd(p, q));

  const double s = 2.0;
  CHECK(chamfer(s * p, s * q) == doctest::Approx(s * s * chamfer(p, q)).epsilon(1e-14));
  CHECK(one_sided_chamfer(s * p, s * q) ==
        doctest::Approx(s * s * one_sided_chamfer(p, q)).epsilon(1e-14));
  CHECK(uhd(s * p, s * q) == doctest::Approx(s * uhd(p, q)).epsilon(1e-14));
}

TEST_CASE("total loss vanishes on a perfect prediction") {
  RandomInstance inst = make_instance(21);
  for (int j = 0; j < 4; ++j) inst.gt[j] = inst.pred.levels[j];
  inst.center_gt = inst.pred.center;
  inst.normals_gt = inst.pred.normals;
  // Make the partial a subset of every level so the OCD terms vanish too.
  inst.partial = inst.pred.levels[0].topRows(4);
  for (int j = 0; j < 4; ++j) inst.pred.levels[j].topRows(4) = inst.partial;
  for (int j = 0; j < 4; ++j) inst.gt[j] = inst.pred.levels[j];

  const auto result = total_loss(inst.pred, inst.gt, inst.partial, inst.center_gt,
                                 inst.normals_gt);
  CHECK(result.value == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("total loss default weights") {
  const LossWeights w;
  CHECK(w.lambda_c == 1.0);
  CHECK(w.lambda_p == 1.0);
  CHECK(w.lambda_o == 1.0);
  CHECK(w.lambda_n == 0.01);
}

TEST_CASE("total loss rejects cardinality mismatches") {
  RandomInstance inst = make_instance(23);
  inst.gt[2].conservativeResize(inst.gt[2].rows() - 1, 3);
  CHECK_THROWS_AS(
      total_loss(inst.pred, inst.gt, inst.partial, inst.center_gt, inst.normals_gt), DataError);
}

TEST_CASE("total loss gradients match central finite differences") {
  const double eps = 1e-5;
  const double tol = 1e-4;
  int checked = 0;

  for (uint64_t seed = 100; seed < 120; ++seed) {
    RandomInstance inst = make_instance(seed);
    const auto base = total_loss(inst.pred, inst.gt, inst.partial, inst.center_gt,
                                 inst.normals_gt);

    auto fd_vs_analytic = [&](double* slot, double analytic) {
      const double saved = *slot;
      *slot = saved + eps;
      const double up = total_loss(inst.pred, inst.gt, inst.partial, inst.center_gt,
                                   inst.normals_gt).value;
      *slot = saved - eps;
      const double down = total_loss(inst.pred, inst.gt, inst.partial, inst.center_gt,
                                     inst.normals_gt).value;
      *slot = saved;
      const double fd = (up - down) / (2.0 * eps);
      const double denom = std::max({std::abs(fd), std::abs(analytic), 1e-6});
      CHECK(std::abs(fd - analytic) / denom < tol);
      ++checked;
    };

    for (int j = 0; j < 4; ++j) {
      for (Eigen::Index i = 0; i < inst.pred.levels[j].rows(); ++i)
        for (int k = 0; k < 3; ++k)
          fd_vs_analytic(&inst.pred.levels[j](i, k), base.d_levels[j](i, k));
    }
    for (int k = 0; k < 3; ++k) fd_vs_analytic(&inst.pred.center[k], base.d_center[k]);
    for (Eigen::Index i = 0; i < inst.pred.normals.rows(); ++i)
      for (int k = 0; k < 3; ++k)
        fd_vs_analytic(&inst.pred.normals(i, k), base.d_normals(i, k));
  }
  CHECK(checked > 10000);
}
