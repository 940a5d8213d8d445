#include <doctest.h>

#include <array>
#include <cmath>

#include "dv/geometry.hpp"
#include "dv/rng.hpp"
#include "support/oracles.hpp"

using namespace dv;

namespace {

Eigen::Matrix3d rot_z90() {
  Eigen::Matrix3d r;
  r << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  return r;
}

// Random rotation from a normalized quaternion.
Eigen::Matrix3d random_rotation(Rng& rng) {
  double q[4];
  double norm = 0.0;
  for (double& v : q) {
    v = rng.normal();
    norm += v * v;
  }
  norm = std::sqrt(norm);
  for (double& v : q) v /= norm;
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  Eigen::Matrix3d r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

PointCloud make_cloud(const std::vector<std::array<double, 3>>& pts) {
  PointCloud c;
  for (const auto& p : pts) c.points.emplace_back(p[0], p[1], p[2]);
  return c;
}

}  // namespace

TEST_CASE("transform_to_camera basics") {
  PointCloud cloud = make_cloud({{1, 2, 3}});

  Extrinsic identity;
  CHECK(transform_to_camera(cloud, identity).points[0] == Eigen::Vector3d(1, 2, 3));

  Extrinsic shift(Eigen::Matrix3d::Identity(), Eigen::Vector3d(0, 0, 5));
  CHECK(transform_to_camera(cloud, shift).points[0] == Eigen::Vector3d(1, 2, 8));

  Extrinsic rot(rot_z90(), Eigen::Vector3d::Zero());
  PointCloud r = transform_to_camera(make_cloud({{1, 0, 0}}), rot);
  CHECK(r.points[0].isApprox(Eigen::Vector3d(0, 1, 0), 1e-12));
}

TEST_CASE("Extrinsic rejects bad rotations") {
  Eigen::Matrix3d shear = Eigen::Matrix3d::Identity();
  shear(0, 1) = 0.01;
  CHECK_THROWS_AS(Extrinsic(shear, Eigen::Vector3d::Zero()), std::invalid_argument);
  Eigen::Matrix3d reflect = Eigen::Matrix3d::Identity();
  reflect(2, 2) = -1.0;
  CHECK_THROWS_AS(Extrinsic(reflect, Eigen::Vector3d::Zero()), std::invalid_argument);
}

TEST_CASE("project follows the pinhole equations") {
  Intrinsic unit(1, 1, 0, 0, 4, 4);
  ProjectedPoints p = project(make_cloud({{0, 0, 1}}), unit);
  REQUIRE(p.size() == 1);
  CHECK(p.u[0] == 0.0);
  CHECK(p.v[0] == 0.0);
  CHECK(p.depth[0] == 1.0);

  Intrinsic intr(2, 2, 10, 10, 20, 20);
  p = project(make_cloud({{1, 2, 2}}), intr);
  REQUIRE(p.size() == 1);
  CHECK(p.u[0] == 11.0);
  CHECK(p.v[0] == 12.0);
  CHECK(p.depth[0] == 2.0);

  // Behind the camera: discarded before division.
  CHECK(project(make_cloud({{0, 0, -1}}), intr).size() == 0);
  CHECK(project(make_cloud({{0, 0, 0}}), intr).size() == 0);
}

TEST_CASE("projection agrees with the scalar oracle on random clouds") {
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    oracle::Calib c;
    Eigen::Matrix3d r = random_rotation(rng);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c.r[i * 3 + j] = r(i, j);
    for (double& t : c.t) t = rng.uniform(-2, 2);
    c.fx = rng.uniform(50, 500);
    c.fy = rng.uniform(50, 500);
    c.width = 64 + static_cast<int>(rng.uniform_index(512));
    c.height = 64 + static_cast<int>(rng.uniform_index(512));
    c.cx = rng.uniform(0, c.width - 1);
    c.cy = rng.uniform(0, c.height - 1);

    std::vector<std::array<double, 3>> pts(500);
    for (auto& p : pts) {
      p = {rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-20, 20)};
    }
    auto expected = oracle::project_points(pts, c);

    Extrinsic ext(r, Eigen::Vector3d(c.t[0], c.t[1], c.t[2]));
    Intrinsic intr(c.fx, c.fy, c.cx, c.cy, c.width, c.height);
    ProjectedPoints got = project(transform_to_camera(make_cloud(pts), ext), intr);

    REQUIRE(got.size() == expected.size());
    for (size_t i = 0; i < expected.size(); ++i) {
      CHECK(got.source_idx[i] == expected[i].index);
      CHECK(std::abs(got.u[i] - expected[i].u) <= 1e-9);
      CHECK(std::abs(got.v[i] - expected[i].v) <= 1e-9);
      CHECK(std::abs(got.depth[i] - expected[i].depth) <= 1e-9);
    }
  }
}

TEST_CASE("rigid transform preserves pairwise distances") {
  Rng rng(55);
  Eigen::Matrix3d r = random_rotation(rng);
  Extrinsic ext(r, Eigen::Vector3d(0.3, -1.0, 2.0));
  std::vector<std::array<double, 3>> pts(50);
  for (auto& p : pts) p = {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
  PointCloud cloud = make_cloud(pts);
  PointCloud mapped = transform_to_camera(cloud, ext);
  for (size_t i = 1; i < pts.size(); ++i) {
    const double before = (cloud.points[i] - cloud.points[i - 1]).norm();
    const double after = (mapped.points[i] - mapped.points[i - 1]).norm();
    CHECK(std::abs(before - after) <= 1e-9);
  }
}

TEST_CASE("R*p + t equals the literal 4x4 homogeneous product") {
  Rng rng(77);
  Eigen::Matrix3d r = random_rotation(rng);
  Eigen::Vector3d t(0.1, 0.2, -0.3);
  Extrinsic ext(r, t);
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.block<3, 3>(0, 0) = r;
  m.block<3, 1>(0, 3) = t;
  for (int i = 0; i < 100; ++i) {
    Eigen::Vector3d p(rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10));
    Eigen::Vector4d h = m * p.homogeneous();
    CHECK((ext.apply(p) - h.head<3>()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("rasterize keeps the minimum depth per cell") {
  Intrinsic intr(1, 1, 0, 0, 8, 8);
  ProjectedPoints p;
  p.u = {1.2, 1.7, 5.0};
  p.v = {2.9, 2.1, 0.5};
  p.depth = {4.0, 2.5, 7.0};
  p.source_idx = {0, 1, 2};
  DepthMap map = rasterize(p, intr);
  CHECK(map.valid_count() == 2);
  CHECK(map.depth(1, 2) == 2.5);  // two points in cell (1,2); min wins
  CHECK(map.depth(5, 0) == 7.0);

  ProjectedPoints distinct;
  distinct.u = {0.0, 3.0};
  distinct.v = {0.0, 3.0};
  distinct.depth = {1.0, 2.0};
  distinct.source_idx = {0, 1};
  DepthMap map2 = rasterize(distinct, intr);
  CHECK(map2.valid_count() == 2);
  CHECK(map2.depth(0, 0) == 1.0);
  CHECK(map2.depth(3, 3) == 2.0);

  CHECK(rasterize(ProjectedPoints{}, intr).valid_count() == 0);
}

TEST_CASE("rasterize matches the brute-force min oracle") {
  Rng rng(202);
  Intrinsic intr(40, 40, 16, 12, 32, 24);
  for (int trial = 0; trial < 10; ++trial) {
    PointCloud cloud;
    for (int i = 0; i < 400; ++i) {
      cloud.points.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.1, 5.0));
    }
    ProjectedPoints proj = project(cloud, intr);
    std::vector<oracle::ProjectedPoint> opts;
    for (size_t i = 0; i < proj.size(); ++i) {
      opts.push_back({proj.source_idx[i], proj.u[i], proj.v[i], proj.depth[i]});
    }
    auto grid = oracle::rasterize_min(opts, intr.width, intr.height);
    DepthMap map = rasterize(proj, intr);
    for (int v = 0; v < intr.height; ++v) {
      for (int u = 0; u < intr.width; ++u) {
        const double expected = grid[static_cast<size_t>(v) * intr.width + u];
        if (std::isinf(expected)) {
          CHECK_FALSE(map.valid(u, v));
        } else {
          REQUIRE(map.valid(u, v));
          CHECK(map.depth(u, v) == expected);
        }
      }
    }
  }
}

TEST_CASE("crop_center shifts the window inward") {
  // cx=400, cy=300 on 800x600: columns [100,700), rows [0,600).
  Intrinsic intr(500, 500, 400, 300, 800, 600);
  CropWindow w = crop_window(800, 600, intr, 600);
  CHECK(w.u0 == 100);
  CHECK(w.v0 == 0);
  CHECK(w.size == 600);

  // Principal point near the corner: shifted fully inward.
  Intrinsic corner(500, 500, 10, 10, 800, 600);
  CropWindow wc = crop_window(800, 600, corner, 600);
  CHECK(wc.u0 == 0);
  CHECK(wc.v0 == 0);
}

TEST_CASE("crop_center identity and errors") {
  Intrinsic intr(10, 10, 4, 4, 8, 8);
  ImageRgb img(8, 8);
  for (int v = 0; v < 8; ++v)
    for (int u = 0; u < 8; ++u) img.at(u, v, 0) = (u + v * 8) / 64.0;
  ImageRgb same = crop_center(img, intr, 8);
  CHECK(same.data() == img.data());

  CHECK_THROWS_WITH_AS(crop_center(img, intr, 9), doctest::Contains("crop larger than image"),
                       std::invalid_argument);

  DepthMap map(8, 8);
  map.set(5, 6, 2.0);
  DepthMap cropped = crop_center(map, intr, 4);  // window starts at (2,2)
  CHECK(cropped.valid(3, 4));
  CHECK(cropped.depth(3, 4) == 2.0);
  CHECK(cropped.valid_count() == 1);
}
