#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "sclab/geom/grid_subsample.hpp"
#include "sclab/geom/kdtree.hpp"
#include "sclab/geom/primitives.hpp"
#include "sclab/geom/sdf.hpp"
#include "sclab/geom/surface_sampling.hpp"
#include "sclab/geom/voxelize.hpp"
#include "test_support.hpp"

using namespace sclab;
using namespace sclab::geom;
using sclab::test::random_cloud;

TEST_CASE("kdtree single point") {
  PointMatrix cloud(1, 3);
  cloud.row(0) = Vec3(0, 0, 0);
  KdTree3d tree(cloud);
  const auto nn = tree.nearest(Vec3(1, 0, 0));
  CHECK(nn.index == 0);
  CHECK(nn.squared_distance == doctest::Approx(1.0));
}

TEST_CASE("kdtree tie broken by lowest index") {
  PointMatrix cloud(2, 3);
  cloud.row(0) = Vec3(0, 0, 0);
  cloud.row(1) = Vec3(0, 0, 0);
  KdTree3d tree(cloud);
  CHECK(tree.nearest(Vec3(1, 1, 1)).index == 0);
}

TEST_CASE("kdtree empty cloud rejected") {
  PointMatrix cloud(0, 3);
  CHECK_THROWS_AS(KdTree3d{cloud}, DataError);
}

TEST_CASE("kdtree equals brute force") {
  Rng rng(7);
  for (int trial = 0; trial < 6; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform_index(500));
    const PointMatrix cloud = random_cloud(n, rng);
    KdTree3d tree(cloud);
    for (int q = 0; q < 100; ++q) {
      const Vec3 query = rng.uniform_vec3(-1.2, 1.2);
      const auto got = tree.nearest(query);
      const auto [want_idx, want_d2] = test::brute_force_nearest(cloud, query);
      CHECK(got.index == want_idx);
      CHECK(got.squared_distance == doctest::Approx(want_d2).epsilon(1e-12));
    }
  }
}

TEST_CASE("kdtree knn ordering and contents") {
  Rng rng(11);
  const PointMatrix cloud = random_cloud(200, rng);
  KdTree3d tree(cloud);
  const Vec3 query = rng.uniform_vec3(-1, 1);
  const auto nbrs = tree.knn(query, 12);
  REQUIRE(nbrs.size() == 12);
  // Sorted by distance, and the first equals the nearest query.
  double prev = -1.0;
  for (const auto idx : nbrs) {
    const double d2 = (cloud.row(idx).transpose() - query).squaredNorm();
    CHECK(d2 >= prev);
    prev = d2;
  }
  CHECK(nbrs.front() == tree.nearest(query).index);
}

TEST_CASE("ray cast against unit cube") {
  const TriangleMesh cube = make_box(Vec3::Zero(), Vec3::Constant(0.5));
  TriangleBvh3d bvh(cube);
  const auto hit = bvh.ray_cast(Vec3(0, 0, 5), Vec3(0, 0, -1));
  REQUIRE(hit.has_value());
  CHECK(hit->t == doctest::Approx(4.5).epsilon(1e-12));
  CHECK((hit->point - Vec3(0, 0, 0.5)).norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hit->normal.dot(Vec3(0, 0, 1)) == doctest::Approx(1.0));

  CHECK_FALSE(bvh.ray_cast(Vec3(0, 0, 5), Vec3(0, 0, 1)).has_value());
}

TEST_CASE("ray cast equals brute force") {
  Rng rng(13);
  const TriangleMesh cube = make_box(Vec3(0.1, -0.2, 0.3), Vec3(0.6, 0.4, 0.5));
  const TriangleMesh sphere = make_icosphere(Vec3(-0.5, 0.8, 0), 0.45, 2);
  for (const TriangleMesh& mesh : {cube, sphere}) {
    TriangleBvh3d bvh(mesh);
    for (int i = 0; i < 1000; ++i) {
      const Vec3 origin = rng.uniform_vec3(-2, 2);
      const Vec3 dir = rng.unit_vec3();
      const auto hit = bvh.ray_cast(origin, dir);
      const auto want = test::brute_force_ray_t(mesh, origin, dir);
      REQUIRE(hit.has_value() == want.has_value());
      if (hit) CHECK(hit->t == doctest::Approx(*want).epsilon(1e-9));
    }
  }
}

TEST_CASE("signed distance on unit cube") {
  const TriangleMesh cube = make_box(Vec3::Zero(), Vec3::Constant(0.5));
  MeshSdf sdf(cube);
  CHECK(sdf.signed_distance(Vec3(0, 0, 0)) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(sdf.signed_distance(Vec3(1, 0, 0)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(sdf.signed_distance(Vec3(0.5, 0, 0))) <= 1e-9);
}

TEST_CASE("signed distance requires watertight mesh") {
  TriangleMesh open = make_box(Vec3::Zero(), Vec3::Constant(0.5));
  open.triangles.conservativeResize(10, 3);  // drop a face
  update_watertight_flag(open);
  CHECK_FALSE(open.watertight);
  CHECK_THROWS_WITH_AS(MeshSdf{open}, "sign undefined for open mesh", DataError);
}

TEST_CASE("signed distance sign and magnitude match oracles") {
  const TriangleMesh cube = make_box(Vec3(0.2, 0, -0.1), Vec3(0.5, 0.35, 0.6));
  const TriangleMesh sphere = make_icosphere(Vec3::Zero(), 0.7, 2);
  const TriangleMesh lshape = make_lshape(1.0, 0.8, 0.45, 0.35, 0.5);
  REQUIRE(is_watertight(lshape));

  Rng rng(17);
  for (const TriangleMesh& mesh : {cube, sphere, lshape}) {
    MeshSdf sdf(mesh);
    const Aabb box = bounding_box(mesh.vertices);
    const Vec3 pad = 0.2 * box.extent();
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
      Vec3 p;
      for (int k = 0; k < 3; ++k)
        p[k] = rng.uniform(box.min[k] - pad[k], box.max[k] + pad[k]);
      const double d = sdf.signed_distance(p);
      if (std::abs(d) <= 1e-6) continue;
      ++checked;
      const bool inside = test::brute_force_inside(mesh, p, rng);
      CHECK((d < 0) == inside);
      CHECK(std::abs(d) == doctest::Approx(test::brute_force_surface_distance(mesh, p)).epsilon(1e-9));
    }
    CHECK(checked > 9000);
  }
}

TEST_CASE("solid voxelization of unit cube at half resolution") {
  const TriangleMesh cube = make_box(Vec3::Zero(), Vec3::Constant(0.5));
  const VoxelGrid grid = voxelize_solid(cube, 0.5);
  CHECK(grid.dims == Eigen::Vector3i(4, 4, 4));
  CHECK(grid.occupied_count() == 8);
  // The occupied block is the central 2x2x2 core.
  for (int k = 1; k <= 2; ++k)
    for (int j = 1; j <= 2; ++j)
      for (int i = 1; i <= 2; ++i) CHECK(grid.occupied(i, j, k));
}

TEST_CASE("voxelization with voxel larger than the mesh") {
  const TriangleMesh cube = make_box(Vec3::Zero(), Vec3::Constant(0.3));
  const VoxelGrid grid = voxelize_solid(cube, 5.0);
  MeshSdf sdf(cube);
  std::size_t occupied = 0;
  for (int k = 0; k < grid.dims.z(); ++k)
    for (int j = 0; j < grid.dims.y(); ++j)
      for (int i = 0; i < grid.dims.x(); ++i) {
        const bool want = sdf.signed_distance(grid.voxel_center(i, j, k)) <= 0.0;
        CHECK(grid.occupied(i, j, k) == want);
        occupied += grid.occupied(i, j, k) ? 1 : 0;
      }
  CHECK(occupied <= 8);
}

TEST_CASE("voxelization occupancy is nonempty for volumes above one voxel") {
  for (const auto& mesh :
       {make_icosphere(Vec3::Zero(), 0.4, 1), make_lshape(0.9, 0.7, 0.4, 0.3, 0.45)}) {
    const VoxelGrid grid = voxelize_solid(mesh, 0.1);
    CHECK(grid.occupied_count() > 0);
  }
}

TEST_CASE("surface sampling stays inside a single triangle") {
  TriangleMesh tri;
  tri.vertices.resize(3, 3);
  tri.vertices << 0, 0, 0, 1, 0, 0, 0, 1, 0;
  tri.triangles.resize(1, 3);
  tri.triangles << 0, 1, 2;
  const PointCloud samples = sample_surface(tri, 64, 5);
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    const double u = samples.points(i, 0), v = samples.points(i, 1);
    CHECK(u >= 0.0);
    CHECK(v >= 0.0);
    CHECK(u + v <= 1.0 + 1e-12);
    CHECK(samples.points(i, 2) == 0.0);
  }
}

TEST_CASE("surface sampling is area proportional per cube face") {
  const TriangleMesh cube = make_box(Vec3::Zero(), Vec3::Constant(0.5));
  const Eigen::Index n = 30000;
  const auto samples = sample_surface_detailed(cube, n, 41);
  std::map<int, int> face_counts;  // triangle pairs (2f, 2f+1) form one face
  for (const auto tri : samples.triangles) ++face_counts[static_cast<int>(tri) / 2];
  const double expected = n / 6.0;
  const double sigma = std::sqrt(n * (1.0 / 6.0) * (5.0 / 6.0));
  for (const auto& [face, count] : face_counts)
    CHECK(std::abs(count - expected) < 5.0 * sigma);
}

TEST_CASE("surface sampling chi-square against triangle areas") {
  const TriangleMesh mesh = make_lshape(1.0, 0.8, 0.45, 0.35, 0.5);
  const Eigen::Index n = 100000;
  const auto samples = sample_surface_detailed(mesh, n, 99);
  std::vector<double> area(mesh.triangle_count());
  double total = 0.0;
  for (Eigen::Index f = 0; f < mesh.triangle_count(); ++f) {
    area[f] = triangle_area(mesh.vertices.row(mesh.triangles(f, 0)),
                            mesh.vertices.row(mesh.triangles(f, 1)),
                            mesh.vertices.row(mesh.triangles(f, 2)));
    total += area[f];
  }
  std::vector<double> counts(mesh.triangle_count(), 0.0);
  for (const auto tri : samples.triangles) counts[tri] += 1.0;
  double chi2 = 0.0;
  for (Eigen::Index f = 0; f < mesh.triangle_count(); ++f) {
    const double expected = n * area[f] / total;
    chi2 += (counts[f] - expected) * (counts[f] - expected) / expected;
  }
  // 19 dof; the 99.9% quantile is ~43.8.
  CHECK(chi2 < 43.8);
}

TEST_CASE("surface sampling is deterministic and validates input") {
  const TriangleMesh cube = make_box(Vec3::Zero(), Vec3::Constant(0.5));
  const PointCloud a = sample_surface(cube, 100, 3);
  const PointCloud b = sample_surface(cube, 100, 3);
  CHECK(a.points == b.points);
  CHECK_THROWS_AS(sample_surface(cube, 0, 3), DataError);

  TriangleMesh empty;
  empty.vertices.resize(0, 3);
  empty.triangles.resize(0, 3);
  CHECK_THROWS_AS(sample_surface(empty, 10, 3), DataError);
}

TEST_CASE("grid subsample collapses one cell to one representative") {
  Rng rng(23);
  PointCloud cloud;
  cloud.points.resize(10, 3);
  for (Eigen::Index i = 0; i < 10; ++i)
    cloud.points.row(i) = Vec3(0.001, 0.001, 0.001) + 0.017 * rng.uniform_vec3(0, 1);
  const PointCloud out = grid_subsample(cloud, 0.02);
  REQUIRE(out.size() == 1);
  bool found = false;
  for (Eigen::Index i = 0; i < 10; ++i)
    found = found || out.points.row(0) == cloud.points.row(i);
  CHECK(found);
}

TEST_CASE("grid subsample keeps separated points") {
  PointCloud cloud;
  cloud.points.resize(2, 3);
  cloud.points.row(0) = Vec3(0, 0, 0);
  cloud.points.row(1) = Vec3(1, 0, 0);
  CHECK(grid_subsample(cloud, 0.02).size() == 2);
}

TEST_CASE("grid subsample representative properties") {
  Rng rng(29);
  PointCloud cloud;
  cloud.points = random_cloud(2000, rng);
  const double res = 0.2;
  const auto kept = grid_subsample_indices(cloud.points, res);
  CHECK(kept.size() <= occupied_cell_count(cloud.points, res));
  std::set<Eigen::Index> unique(kept.begin(), kept.end());
  CHECK(unique.size() == kept.size());
  for (const auto idx : kept) {
    const Vec3 p = cloud.points.row(idx).transpose();
    const Vec3 cell(std::floor(p.x() / res), std::floor(p.y() / res), std::floor(p.z() / res));
    const Vec3 centroid = res * (cell + Vec3::Constant(0.5));
    CHECK((p - centroid).norm() <= std::sqrt(3.0) / 2.0 * res + 1e-12);
  }
}

TEST_CASE("grid subsample is idempotent") {
  Rng rng(31);
  PointCloud cloud;
  cloud.points = random_cloud(3000, rng);
  const PointCloud once = grid_subsample(cloud, 0.25);
  const PointCloud twice = grid_subsample(once, 0.25);
  CHECK(once.points == twice.points);
}

TEST_CASE("grid subsample keeps normals and labels of the representative") {
  OrientedPointCloud cloud;
  cloud.points.resize(3, 3);
  cloud.points << 0.001, 0.001, 0.001, 0.002, 0.001, 0.001, 0.9, 0.9, 0.9;
  cloud.normals.resize(3, 3);
  cloud.normals << 1, 0, 0, 0, 1, 0, 0, 0, 1;
  cloud.labels = {4, 5, 6};
  const OrientedPointCloud out = grid_subsample(cloud, 0.5);
  REQUIRE(out.size() == 2);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    // Find the source row and check the payload came along.
    for (Eigen::Index j = 0; j < cloud.size(); ++j) {
      if (out.points.row(i) == cloud.points.row(j)) {
        CHECK(out.normals.row(i) == cloud.normals.row(j));
        CHECK(out.labels[i] == cloud.labels[j]);
      }
    }
  }
}

TEST_CASE("mesh validation catches defects") {
  TriangleMesh mesh = make_box(Vec3::Zero(), Vec3::Constant(0.5));
  CHECK_NOTHROW(validate(mesh));
  CHECK(is_watertight(mesh));

  TriangleMesh bad_index = mesh;
  bad_index.triangles(0, 0) = 99;
  CHECK_THROWS_AS(validate(bad_index), DataError);

  TriangleMesh degenerate = mesh;
  degenerate.watertight = false;
  degenerate.vertices.row(1) = degenerate.vertices.row(0);
  CHECK_THROWS_AS(validate(degenerate), DataError);

  CHECK(is_watertight(make_icosphere(Vec3::Zero(), 1.0, 1)));
  CHECK(is_watertight(make_lshape(1, 1, 0.5, 0.5, 1)));
}
