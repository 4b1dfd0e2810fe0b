#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "podc/camera.hpp"
#include "podc/grid.hpp"

namespace podc {

/// Half-open pixel rectangle [u0, u1) x [v0, v1).
struct Region {
  int u0 = 0;
  int v0 = 0;
  int u1 = 0;
  int v1 = 0;

  bool contains(int u, int v) const { return u >= u0 && u < u1 && v >= v0 && v < v1; }
};

/// One plane n·X = offset in camera coordinates. A plane with a region owns
/// the pixels inside it (later list entries override earlier ones); planes
/// without a region compete by nearest positive intersection depth.
struct PlaneSpec {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  double offset = 1.0;  // meters, > 0 once the normal sign is fixed
  std::optional<Region> region;
};

struct SceneSpec {
  std::string name;
  std::vector<PlaneSpec> planes;
  Intrinsics intrinsics;
  double z_min = 0.1;
  double z_max = 100.0;

  /// Normalizes plane normals (flipping sign so offsets are positive) and
  /// throws std::invalid_argument on degenerate planes or an invalid camera.
  void validate_and_normalize();
};

struct RenderedScene {
  DepthMap depth;
  NormalMap normals;
  Grid<int> owner;  // per-pixel index into SceneSpec::planes
};

/// Exact ray-plane intersection depth and owning-plane normal per pixel.
/// Throws std::invalid_argument if some pixel is owned by no plane or its
/// owning plane is parallel to (or behind) the pixel ray.
RenderedScene render_scene(const SceneSpec& spec);

struct SamplePattern {
  enum class Mode { kUniformRandom, kScanline };

  Mode mode = Mode::kUniformRandom;
  /// Exact number of seeds (uniform-random). Wins over ratio when both set.
  std::optional<long long> count;
  /// Fraction of valid pixels (uniform-random) or 1/step (scanline).
  std::optional<double> ratio;
  std::uint64_t seed = 0;
};

/// Sparse seed map: values copied verbatim from the ground truth, 0 elsewhere.
/// Uniform-random draws without replacement; with a fixed seed, a smaller
/// count selects a prefix of a larger count's pixels, so sparsity sweeps are
/// nested. Scanline keeps every s-th row with s = round(1/ratio).
DepthMap sample_sparse(const DepthMap& ground_truth, const SamplePattern& pattern);

/// Corrupts round(outlier_frac * seeds) seeds by a relative factor
/// (1 ± magnitude) with random sign. Seeds within 2 px (Chebyshev) of a
/// depth discontinuity in the seed map — a neighbor seed differing by more
/// than 10% relative — are 4x more likely to be picked.
DepthMap inject_noise(const DepthMap& seeds, double outlier_frac, double magnitude,
                      std::uint64_t seed);

/// Multiplicative zero-mean perturbation: D * (1 + amplitude * uniform(-1,1)).
/// Stands in for an imperfect coarse prediction in the benchmark harness.
DepthMap perturb_depth(const DepthMap& depth, double amplitude, std::uint64_t seed);

/// Named preset scenes: "single-plane", "wedge", "staircase", "box-on-ground".
/// Every preset's planes share one plane-origin distance (they are tangent to
/// a common sphere around the camera), so the exact plane-origin map is
/// globally constant while the depth maps still carry discontinuities at
/// region seams.
SceneSpec preset_scene(std::string_view name);

const std::vector<std::string>& preset_names();

}  // namespace podc
