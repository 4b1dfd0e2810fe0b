#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "podc/plane_origin.hpp"
#include "podc/rng.hpp"
#include "podc/scene.hpp"

using namespace podc;

namespace {

const Intrinsics kCamera{100.0, 100.0, 50.0, 50.0, 128, 96};

NormalMap constant_normals(int rows, int cols, const Eigen::Vector3d& n) {
  return NormalMap(rows, cols, n.normalized());
}

}  // namespace

TEST_CASE("fronto-parallel plane keeps P equal to depth") {
  DepthMap depth(96, 128, 5.0);
  const NormalMap normals = constant_normals(96, 128, {0, 0, 1});
  const PlaneOriginMap p = depth_to_plane_origin(depth, normals, kCamera);
  for (double value : p) {
    CHECK(value == 5.0);  // N·r = 1 exactly because r.z = 1
  }
}

TEST_CASE("worked tilted-normal example") {
  DepthMap depth(96, 128, 0.0);
  depth.at(50, 60) = 10.0;
  const NormalMap normals = constant_normals(96, 128, {0.6, 0.0, 0.8});

  const PlaneOriginMap p = depth_to_plane_origin(depth, normals, kCamera);
  CHECK(p.at(50, 60) == doctest::Approx(8.6).epsilon(1e-12));

  const DepthMap back = plane_origin_to_depth(p, normals, kCamera);
  CHECK(back.at(50, 60) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("invalid pixels propagate through both transforms") {
  DepthMap depth(8, 8, 3.0);
  depth.at(2, 2) = 0.0;
  depth.at(5, 7) = 0.0;
  const Intrinsics K{50.0, 50.0, 4.0, 4.0, 8, 8};
  const NormalMap normals = constant_normals(8, 8, {0, 0, 1});

  const PlaneOriginMap p = depth_to_plane_origin(depth, normals, K);
  CHECK(p.at(2, 2) == 0.0);
  CHECK(p.at(5, 7) == 0.0);

  const DepthMap back = plane_origin_to_depth(p, normals, K);
  CHECK(back.at(2, 2) == 0.0);
  CHECK(back.at(5, 7) == 0.0);
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) {
      CHECK(is_valid(back.at(v, u)) == is_valid(depth.at(v, u)));
    }
  }
}

TEST_CASE("grazing rays are marked invalid, not divided") {
  // Normal perpendicular to the center pixel's ray.
  DepthMap depth(96, 128, 4.0);
  NormalMap normals = constant_normals(96, 128, {0, 0, 1});
  normals.at(50, 50) = Eigen::Vector3d(1, 0, 0);  // ray there is (0,0,1)

  const PlaneOriginMap p = depth_to_plane_origin(depth, normals, kCamera);
  CHECK(p.at(50, 50) == 0.0);

  PlaneOriginMap q(96, 128, 4.0);
  const DepthMap back = plane_origin_to_depth(q, normals, kCamera);
  CHECK(back.at(50, 50) == 0.0);
  CHECK(back.at(0, 0) > 0.0);
}

TEST_CASE("round trip is exact to 1e-9 relative") {
  std::mt19937_64 rng(42);
  const Intrinsics K{80.0, 120.0, 31.0, 23.0, 64, 48};
  DepthMap depth(48, 64, 0.0);
  NormalMap normals(48, 64, Eigen::Vector3d::Zero());
  for (int v = 0; v < 48; ++v) {
    for (int u = 0; u < 64; ++u) {
      depth.at(v, u) = uniform_range(rng, 0.5, 30.0);
      Eigen::Vector3d n(uniform_range(rng, -1, 1), uniform_range(rng, -1, 1),
                        uniform_range(rng, 0.5, 1.5));
      n.normalize();
      if (n.dot(pixel_ray(K, u, v)) < 0) n = -n;
      normals.at(v, u) = n;
    }
  }

  const PlaneOriginMap p = depth_to_plane_origin(depth, normals, K);
  const DepthMap back = plane_origin_to_depth(p, normals, K);
  for (int v = 0; v < 48; ++v) {
    for (int u = 0; u < 64; ++u) {
      if (normals.at(v, u).dot(pixel_ray(K, u, v)) < kDefaultEpsRay) continue;
      CHECK(std::abs(back.at(v, u) - depth.at(v, u)) <= 1e-9 * depth.at(v, u));
    }
  }
}

TEST_CASE("plane-origin distance is piecewise constant on preset scenes") {
  for (const std::string& name : preset_names()) {
    const SceneSpec spec = preset_scene(name);
    const RenderedScene scene = render_scene(spec);
    const PlaneOriginMap p =
        depth_to_plane_origin(scene.depth, scene.normals, spec.intrinsics);

    SceneSpec normalized = spec;
    normalized.validate_and_normalize();
    for (std::size_t plane = 0; plane < normalized.planes.size(); ++plane) {
      double lo = 1e300;
      double hi = -1e300;
      for (int v = 0; v < p.rows(); ++v) {
        for (int u = 0; u < p.cols(); ++u) {
          if (scene.owner.at(v, u) != static_cast<int>(plane)) continue;
          lo = std::min(lo, p.at(v, u));
          hi = std::max(hi, p.at(v, u));
        }
      }
      if (hi < lo) continue;  // plane owns no pixels
      const double d0 = normalized.planes[plane].offset;
      CHECK(hi - lo <= 1e-9 * d0);
      CHECK(std::abs(lo - d0) <= 1e-9 * d0);
    }
  }
}

TEST_CASE("dimension mismatch is rejected") {
  DepthMap depth(10, 10, 1.0);
  NormalMap normals(10, 11, Eigen::Vector3d(0, 0, 1));
  CHECK_THROWS_AS(depth_to_plane_origin(depth, normals, kCamera), std::invalid_argument);

  NormalMap ok(10, 10, Eigen::Vector3d(0, 0, 1));
  CHECK_THROWS_AS(depth_to_plane_origin(depth, ok, kCamera), std::invalid_argument);
}
