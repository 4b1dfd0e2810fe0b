#include <doctest.h>

#include <random>
#include <stdexcept>

#include "podc/camera.hpp"
#include "podc/rng.hpp"

using namespace podc;

TEST_CASE("ray_grid matches the pinhole formula") {
  const Intrinsics identity{1.0, 1.0, 0.0, 0.0, 4, 4};
  CHECK(ray_grid(identity).at(0, 0) == Eigen::Vector3d(0, 0, 1));

  const Intrinsics K{100.0, 100.0, 50.0, 50.0, 128, 96};
  const RayGrid rays = ray_grid(K);
  CHECK(rays.at(50, 60).x() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(rays.at(50, 60).y() == doctest::Approx(0.0));
  CHECK(rays.at(50, 60).z() == 1.0);

  const Intrinsics anisotropic{100.0, 200.0, 50.0, 50.0, 128, 96};
  const RayGrid rays2 = ray_grid(anisotropic);
  CHECK(rays2.at(90, 50).x() == doctest::Approx(0.0));
  CHECK(rays2.at(90, 50).y() == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("ray z-component is exactly 1 everywhere") {
  const Intrinsics K{123.0, 77.0, 31.5, 17.25, 64, 48};
  for (const Eigen::Vector3d& ray : ray_grid(K)) {
    CHECK(ray.z() == 1.0);
  }
}

TEST_CASE("ray_grid is a pure function of the intrinsics") {
  const Intrinsics K{100.0, 100.0, 64.0, 48.0, 128, 96};
  const RayGrid a = ray_grid(K);
  const RayGrid b = ray_grid(K);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);  // bit-identical
  }
}

TEST_CASE("backproject places the point at the requested depth") {
  const Intrinsics identity{1.0, 1.0, 0.0, 0.0, 4, 4};
  CHECK(backproject(identity, {0, 0}, 7.0) == Eigen::Vector3d(0, 0, 7));

  const Intrinsics K{100.0, 100.0, 50.0, 50.0, 128, 96};
  const Eigen::Vector3d point = backproject(K, {60, 50}, 10.0);
  CHECK(point.x() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(point.y() == doctest::Approx(0.0));
  CHECK(point.z() == 10.0);

  CHECK_THROWS_AS(backproject(K, {3, 3}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(backproject(K, {3, 3}, -2.0), std::invalid_argument);
}

TEST_CASE("projecting a backprojected pixel recovers the pixel") {
  std::mt19937_64 rng(7);
  const Intrinsics K{180.0, 140.0, 63.0, 41.0, 128, 96};
  for (int trial = 0; trial < 200; ++trial) {
    const PixelIndex pixel{static_cast<int>(uniform_below(rng, 128)),
                           static_cast<int>(uniform_below(rng, 96))};
    const double depth = uniform_range(rng, 0.5, 40.0);
    const Eigen::Vector3d point = backproject(K, pixel, depth);
    CHECK(point.z() == depth);  // exact by construction
    const Eigen::Vector2d reprojected = project(K, point);
    CHECK(std::abs(reprojected.x() - pixel.u) <= 1e-9);
    CHECK(std::abs(reprojected.y() - pixel.v) <= 1e-9);
  }
}

TEST_CASE("intrinsics validation rejects bad parameters") {
  CHECK_THROWS_AS((Intrinsics{0.0, 1.0, 0.0, 0.0, 4, 4}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((Intrinsics{1.0, -1.0, 0.0, 0.0, 4, 4}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((Intrinsics{1.0, 1.0, 4.0, 0.0, 4, 4}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((Intrinsics{1.0, 1.0, 0.0, 0.0, 0, 4}).validate(), std::invalid_argument);
  CHECK_NOTHROW((Intrinsics{1.0, 1.0, 0.0, 0.0, 4, 4}).validate());
}
