#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "podc/frontend.hpp"
#include "podc/rng.hpp"
#include "podc/scene.hpp"

using namespace podc;

TEST_CASE("IDW with a single seed fills the whole grid") {
  DepthMap seeds(6, 9, 0.0);
  seeds.at(3, 4) = 4.0;
  const DepthMap dense = coarse_from_sparse(seeds, 8, 2.0);
  for (double value : dense) CHECK(value == 4.0);
}

TEST_CASE("IDW reproduces seed values exactly at seed pixels") {
  std::mt19937_64 rng(11);
  DepthMap seeds(16, 16, 0.0);
  for (int i = 0; i < 20; ++i) {
    seeds.at(uniform_below(rng, 16), uniform_below(rng, 16)) = uniform_range(rng, 1.0, 9.0);
  }
  const DepthMap dense = coarse_from_sparse(seeds, 4, 2.0);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (is_valid(seeds[i])) CHECK(dense[i] == seeds[i]);
  }
}

TEST_CASE("IDW worked 1D example") {
  // Row with seeds at columns 0 and 10; pixel 5 averages (2/5 + 12/5)/(2/5).
  DepthMap seeds(1, 11, 0.0);
  seeds.at(0, 0) = 2.0;
  seeds.at(0, 10) = 12.0;
  const DepthMap dense = coarse_from_sparse(seeds, 2, 1.0);
  CHECK(dense.at(0, 5) == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("IDW output stays inside the seed range") {
  std::mt19937_64 rng(5);
  DepthMap seeds(24, 24, 0.0);
  double lo = 1e300;
  double hi = -1e300;
  for (int i = 0; i < 30; ++i) {
    const double value = uniform_range(rng, 0.5, 20.0);
    seeds.at(uniform_below(rng, 24), uniform_below(rng, 24)) = value;
  }
  for (double v : seeds) {
    if (!is_valid(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const DepthMap dense = coarse_from_sparse(seeds, 5, 2.0);
  for (double value : dense) {
    CHECK(value >= lo);
    CHECK(value <= hi);
  }
}

TEST_CASE("IDW rejects empty seed maps and bad k") {
  DepthMap empty(4, 4, 0.0);
  CHECK_THROWS_AS(coarse_from_sparse(empty, 4, 2.0), std::invalid_argument);
  DepthMap one(4, 4, 0.0);
  one.at(0, 0) = 1.0;
  CHECK_THROWS_AS(coarse_from_sparse(one, 0, 2.0), std::invalid_argument);
}

TEST_CASE("leave-one-out prediction ignores the seed's own value") {
  DepthMap seeds(1, 11, 0.0);
  seeds.at(0, 0) = 2.0;
  seeds.at(0, 5) = 100.0;  // outlier
  seeds.at(0, 10) = 12.0;
  const DepthMap loo = leave_one_out_prediction(seeds, 2, 1.0);
  CHECK(loo.at(0, 5) == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(loo.at(0, 1) == 0.0);  // only defined at seed pixels

  DepthMap single(4, 4, 0.0);
  single.at(2, 2) = 3.0;
  CHECK(leave_one_out_prediction(single, 4, 2.0).at(2, 2) == 3.0);
}

TEST_CASE("normal estimation recovers the fronto-parallel plane") {
  const Intrinsics K{100.0, 100.0, 16.0, 12.0, 32, 24};
  DepthMap depth(24, 32, 5.0);
  const NormalMap normals = estimate_normals(depth, K, 2);
  for (int v = 2; v < 22; ++v) {
    for (int u = 2; u < 30; ++u) {
      const Eigen::Vector3d& n = normals.at(v, u);
      CHECK(std::abs(n.norm() - 1.0) <= 1e-6);
      CHECK((n - Eigen::Vector3d(0, 0, 1)).norm() <= 1e-6);
    }
  }
}

TEST_CASE("normal estimation matches a known tilted plane to 0.1 degree") {
  SceneSpec spec = preset_scene("single-plane");
  spec.planes[0].normal = Eigen::Vector3d(0.3, -0.2, 0.95);
  spec.planes[0].offset = 4.0;
  const RenderedScene scene = render_scene(spec);
  const Eigen::Vector3d expected = scene.normals.at(0, 0);

  const NormalMap normals = estimate_normals(scene.depth, spec.intrinsics, 2);
  const RayGrid rays = ray_grid(spec.intrinsics);
  for (int v = 4; v < spec.intrinsics.height - 4; v += 3) {
    for (int u = 4; u < spec.intrinsics.width - 4; u += 3) {
      const Eigen::Vector3d& n = normals.at(v, u);
      CHECK(std::abs(n.norm() - 1.0) <= 1e-6);
      CHECK(n.dot(rays.at(v, u)) > 0.0);
      const double angle = std::acos(std::clamp(n.dot(expected), -1.0, 1.0));
      CHECK(angle <= 0.1 * M_PI / 180.0);
    }
  }
}

TEST_CASE("normals fall back to the nearest estimated pixel") {
  const Intrinsics K{50.0, 50.0, 8.0, 8.0, 16, 16};
  DepthMap depth(16, 16, 0.0);
  // Dense block on the left; two stray points far right can't support a fit.
  for (int v = 0; v < 16; ++v) {
    for (int u = 0; u < 6; ++u) depth.at(v, u) = 3.0;
  }
  depth.at(8, 14) = 3.0;
  depth.at(8, 15) = 3.0;
  const NormalMap normals = estimate_normals(depth, K, 1);
  CHECK((normals.at(8, 14) - Eigen::Vector3d(0, 0, 1)).norm() <= 1e-6);
  CHECK(std::abs(normals.at(0, 15).norm() - 1.0) <= 1e-6);
}

TEST_CASE("confidence follows the Gaussian residual model") {
  DepthMap seeds(2, 2, 0.0);
  seeds.at(0, 0) = 5.0;
  seeds.at(0, 1) = 5.0;
  seeds.at(1, 0) = 5.0;
  DepthMap reference(2, 2, 5.0);
  reference.at(0, 1) = 6.0;   // residual = b
  reference.at(1, 0) = 4.0;   // residual = -b

  const ConfidenceMap m = confidence_from_residual(seeds, reference, 1.0);
  CHECK(m.at(0, 0) == 1.0);
  CHECK(m.at(0, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(m.at(1, 0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(m.at(1, 1) == 0.0);  // no seed

  // Huge tolerance: even a 1 m residual keeps confidence ~1.
  DepthMap off(2, 2, 5.0);
  off.at(0, 0) = 6.0;
  const ConfidenceMap tolerant = confidence_from_residual(seeds, off, 1000.0);
  CHECK(tolerant.at(0, 0) == doctest::Approx(1.0).epsilon(1e-6));

  CHECK_THROWS_AS(confidence_from_residual(seeds, reference, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(confidence_from_residual(seeds, reference, -1.0), std::invalid_argument);
}

TEST_CASE("confidence is monotone in residual and in b") {
  DepthMap seeds(1, 1, 0.0);
  seeds.at(0, 0) = 5.0;
  double previous = 2.0;
  for (double residual = 0.0; residual <= 3.0; residual += 0.25) {
    DepthMap reference(1, 1, 5.0 + residual);
    const double m = confidence_from_residual(seeds, reference, 0.7).at(0, 0);
    CHECK(m <= previous);
    previous = m;
  }
  previous = 0.0;
  DepthMap reference(1, 1, 6.5);
  for (double b = 0.1; b <= 10.0; b *= 2.0) {
    const double m = confidence_from_residual(seeds, reference, b).at(0, 0);
    CHECK(m >= previous);
    previous = m;
  }
}

TEST_CASE("guidance channels are normalized and clamped") {
  const int rows = 10;
  const int cols = 20;
  DepthMap depth(rows, cols, 4.0);
  depth.at(0, 1) = 8.0;   // hits depth_max
  depth.at(0, 2) = 20.0;  // beyond depth_max, must clamp
  NormalMap normals(rows, cols, Eigen::Vector3d(0, 0, 1));

  const FeatureGrid g = build_guidance(depth, normals, 8.0);
  CHECK(g.channels() == kGuidanceChannels);
  CHECK(g.at(0, 0)[0] == 0.0);
  CHECK(g.at(0, 0)[1] == 0.0);
  CHECK(g.at(0, 1)[2] == 1.0);
  CHECK(g.at(0, 2)[2] == 1.0);
  CHECK(g.at(3, 5)[0] == doctest::Approx(5.0 / cols));
  CHECK(g.at(3, 5)[1] == doctest::Approx(3.0 / rows));
  CHECK(g.at(3, 5)[5] == 1.0);
  for (int v = 0; v < rows; ++v) {
    for (int u = 0; u < cols; ++u) {
      for (double channel : g.at(v, u)) {
        CHECK(channel >= -1.0);
        CHECK(channel <= 1.0);
      }
    }
  }

  CHECK_THROWS_AS(build_guidance(depth, normals, 0.0), std::invalid_argument);
}
