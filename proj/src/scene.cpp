#include "podc/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "podc/rng.hpp"

namespace podc {
namespace {

constexpr double kParallelRayTol = 1e-12;
// Relative depth gap between nearby seeds that counts as a discontinuity
// for the boundary-biased noise model.
constexpr double kBoundaryGap = 0.10;
constexpr int kBoundaryRadius = 2;
constexpr double kBoundaryWeight = 4.0;

std::string pixel_str(int u, int v) {
  return "(" + std::to_string(u) + ", " + std::to_string(v) + ")";
}

}  // namespace

void SceneSpec::validate_and_normalize() {
  intrinsics.validate();
  if (planes.empty()) {
    throw std::invalid_argument("SceneSpec '" + name + "': no planes");
  }
  if (!(z_min > 0.0) || !(z_max > z_min)) {
    throw std::invalid_argument("SceneSpec '" + name + "': need 0 < z_min < z_max");
  }
  for (std::size_t i = 0; i < planes.size(); ++i) {
    PlaneSpec& plane = planes[i];
    const double norm = plane.normal.norm();
    if (!(norm > 1e-12)) {
      throw std::invalid_argument("SceneSpec '" + name + "': plane " + std::to_string(i) +
                                  " has a zero normal");
    }
    plane.normal /= norm;
    plane.offset /= norm;
    if (plane.offset < 0.0) {  // flip so the origin-to-plane distance is positive
      plane.normal = -plane.normal;
      plane.offset = -plane.offset;
    }
    if (plane.offset == 0.0) {
      throw std::invalid_argument("SceneSpec '" + name + "': plane " + std::to_string(i) +
                                  " passes through the camera origin");
    }
    if (plane.region) {
      const Region& r = *plane.region;
      if (r.u0 < 0 || r.v0 < 0 || r.u1 > intrinsics.width || r.v1 > intrinsics.height ||
          r.u0 >= r.u1 || r.v0 >= r.v1) {
        throw std::invalid_argument("SceneSpec '" + name + "': plane " + std::to_string(i) +
                                    " has an empty or out-of-bounds region");
      }
    }
  }
}

RenderedScene render_scene(const SceneSpec& spec) {
  SceneSpec scene = spec;
  scene.validate_and_normalize();

  const Intrinsics& K = scene.intrinsics;
  RenderedScene out{DepthMap(K.height, K.width, 0.0),
                    NormalMap(K.height, K.width, Eigen::Vector3d::Zero()),
                    Grid<int>(K.height, K.width, -1)};

  for (int v = 0; v < K.height; ++v) {
    for (int u = 0; u < K.width; ++u) {
      const Eigen::Vector3d ray = pixel_ray(K, u, v);

      // Mask priority: the last region containing the pixel wins.
      int owner = -1;
      for (std::size_t i = 0; i < scene.planes.size(); ++i) {
        if (scene.planes[i].region && scene.planes[i].region->contains(u, v)) {
          owner = static_cast<int>(i);
        }
      }
      if (owner < 0) {
        // Nearest positive intersection among region-free planes.
        double best_depth = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < scene.planes.size(); ++i) {
          if (scene.planes[i].region) continue;
          const double ray_dot = scene.planes[i].normal.dot(ray);
          if (ray_dot <= kParallelRayTol) continue;
          const double depth = scene.planes[i].offset / ray_dot;
          if (depth < best_depth) {
            best_depth = depth;
            owner = static_cast<int>(i);
          }
        }
      }
      if (owner < 0) {
        throw std::invalid_argument("render_scene '" + scene.name + "': pixel " +
                                    pixel_str(u, v) + " is owned by no plane");
      }

      const PlaneSpec& plane = scene.planes[owner];
      const double ray_dot = plane.normal.dot(ray);
      if (ray_dot <= kParallelRayTol) {
        throw std::invalid_argument("render_scene '" + scene.name + "': plane " +
                                    std::to_string(owner) + " is parallel to its ray at pixel " +
                                    pixel_str(u, v));
      }
      out.depth.at(v, u) = plane.offset / ray_dot;
      out.normals.at(v, u) = plane.normal;
      out.owner.at(v, u) = owner;
    }
  }
  return out;
}

DepthMap sample_sparse(const DepthMap& ground_truth, const SamplePattern& pattern) {
  DepthMap seeds(ground_truth.rows(), ground_truth.cols(), 0.0);

  if (pattern.mode == SamplePattern::Mode::kScanline) {
    if (!pattern.ratio || !(*pattern.ratio > 0.0)) {
      throw std::invalid_argument("sample_sparse: scanline mode needs a positive ratio");
    }
    const int step = std::max<int>(1, static_cast<int>(std::llround(1.0 / *pattern.ratio)));
    for (int v = 0; v < ground_truth.rows(); v += step) {
      for (int u = 0; u < ground_truth.cols(); ++u) {
        seeds.at(v, u) = ground_truth.at(v, u);
      }
    }
    return seeds;
  }

  std::vector<std::size_t> valid;
  valid.reserve(ground_truth.size());
  for (std::size_t i = 0; i < ground_truth.size(); ++i) {
    if (is_valid(ground_truth[i])) valid.push_back(i);
  }

  long long count = 0;
  if (pattern.count) {
    count = *pattern.count;
  } else if (pattern.ratio) {
    count = std::llround(*pattern.ratio * static_cast<double>(valid.size()));
  } else {
    throw std::invalid_argument("sample_sparse: uniform-random mode needs count or ratio");
  }
  if (count < 0 || static_cast<std::size_t>(count) > valid.size()) {
    throw std::invalid_argument("sample_sparse: requested " + std::to_string(count) +
                                " seeds but only " + std::to_string(valid.size()) +
                                " valid pixels exist");
  }

  // Partial Fisher-Yates: the first m selections for a given seed are a
  // prefix of the first n > m, which keeps sparsity sweeps nested.
  std::mt19937_64 rng(pattern.seed);
  for (long long i = 0; i < count; ++i) {
    const std::size_t j = i + uniform_below(rng, valid.size() - i);
    std::swap(valid[i], valid[j]);
    seeds[valid[i]] = ground_truth[valid[i]];
  }
  return seeds;
}

DepthMap inject_noise(const DepthMap& seeds, double outlier_frac, double magnitude,
                      std::uint64_t seed) {
  if (outlier_frac < 0.0 || outlier_frac > 1.0) {
    throw std::invalid_argument("inject_noise: outlier_frac must lie in [0, 1]");
  }

  std::vector<std::size_t> seed_pixels;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (is_valid(seeds[i])) seed_pixels.push_back(i);
  }
  const long long corrupt_count =
      std::llround(outlier_frac * static_cast<double>(seed_pixels.size()));
  DepthMap out = seeds;
  if (corrupt_count == 0) return out;

  // A seed close to a depth discontinuity (another seed within kBoundaryRadius
  // whose depth differs by more than kBoundaryGap relative) draws outliers
  // with kBoundaryWeight times the base probability.
  std::vector<double> weights(seed_pixels.size(), 1.0);
  for (std::size_t s = 0; s < seed_pixels.size(); ++s) {
    const int v = static_cast<int>(seed_pixels[s] / seeds.cols());
    const int u = static_cast<int>(seed_pixels[s] % seeds.cols());
    const double d = seeds.at(v, u);
    bool near_boundary = false;
    for (int dv = -kBoundaryRadius; dv <= kBoundaryRadius && !near_boundary; ++dv) {
      for (int du = -kBoundaryRadius; du <= kBoundaryRadius; ++du) {
        if (!seeds.in_bounds(v + dv, u + du)) continue;
        const double other = seeds.at(v + dv, u + du);
        if (!is_valid(other)) continue;
        if (std::abs(other - d) > kBoundaryGap * std::min(other, d)) {
          near_boundary = true;
          break;
        }
      }
    }
    if (near_boundary) weights[s] = kBoundaryWeight;
  }

  // Weighted sampling without replacement.
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(seed_pixels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::size_t remaining = order.size();
  for (long long picked = 0; picked < corrupt_count; ++picked) {
    const double target = uniform_unit(rng) * total;
    double cumulative = 0.0;
    std::size_t chosen = remaining - 1;
    for (std::size_t idx = 0; idx < remaining; ++idx) {
      cumulative += weights[order[idx]];
      if (target < cumulative) {
        chosen = idx;
        break;
      }
    }
    const std::size_t pixel = seed_pixels[order[chosen]];
    const double sign = (rng() & 1u) ? 1.0 : -1.0;
    out[pixel] = out[pixel] * (1.0 + sign * magnitude);
    total -= weights[order[chosen]];
    std::swap(order[chosen], order[remaining - 1]);
    --remaining;
  }
  return out;
}

DepthMap perturb_depth(const DepthMap& depth, double amplitude, std::uint64_t seed) {
  if (amplitude < 0.0) {
    throw std::invalid_argument("perturb_depth: amplitude must be non-negative");
  }
  std::mt19937_64 rng(seed);
  DepthMap out = depth;
  for (double& value : out) {
    if (!is_valid(value)) continue;
    value *= 1.0 + amplitude * uniform_range(rng, -1.0, 1.0);
  }
  return out;
}

namespace {

Intrinsics desk_camera() {
  Intrinsics K;
  K.fx = 100.0;
  K.fy = 100.0;
  K.cx = 64.0;
  K.cy = 48.0;
  K.width = 128;
  K.height = 96;
  return K;
}

SceneSpec make_single_plane() {
  SceneSpec spec;
  spec.name = "single-plane";
  spec.intrinsics = desk_camera();
  spec.z_min = 1.0;
  spec.z_max = 10.0;
  spec.planes.push_back({Eigen::Vector3d(0, 0, 1), 5.0, std::nullopt});
  return spec;
}

// Two planes tilted ±0.6 around the vertical seam line {x = 0, z = 6}; both
// sit 4.8 m from the origin, so depth is continuous at the seam column.
SceneSpec make_wedge() {
  SceneSpec spec;
  spec.name = "wedge";
  spec.intrinsics = desk_camera();
  spec.z_min = 1.0;
  spec.z_max = 10.0;
  spec.planes.push_back({Eigen::Vector3d(-0.6, 0, 0.8), 4.8, std::nullopt});
  spec.planes.push_back({Eigen::Vector3d(0.6, 0, 0.8), 4.8, std::nullopt});
  return spec;
}

// Six horizontal facet bands, all tangent to the 5 m sphere, with depth
// jumps of up to ~0.8 m between bands.
SceneSpec make_staircase() {
  SceneSpec spec;
  spec.name = "staircase";
  spec.intrinsics = desk_camera();
  spec.z_min = 1.0;
  spec.z_max = 10.0;
  const int band_rows = spec.intrinsics.height / 6;
  for (int k = 0; k < 6; ++k) {
    const double tilt = -0.9 + 0.36 * k;
    Region band{0, k * band_rows, spec.intrinsics.width, (k + 1) * band_rows};
    if (k == 5) band.v1 = spec.intrinsics.height;
    spec.planes.push_back({Eigen::Vector3d(0.0, std::sin(tilt), std::cos(tilt)), 5.0, band});
  }
  return spec;
}

// Frontal wall, ground seen obliquely, and a tilted box face; all 2 m from
// the origin. The box outline and the wall/ground seam carry large depth
// discontinuities.
SceneSpec make_box_on_ground() {
  SceneSpec spec;
  spec.name = "box-on-ground";
  spec.intrinsics = desk_camera();
  spec.z_min = 1.0;
  spec.z_max = 30.0;
  const int w = spec.intrinsics.width;
  const int h = spec.intrinsics.height;
  spec.planes.push_back({Eigen::Vector3d(0, 0, 1), 2.0, Region{0, 0, w, h}});
  spec.planes.push_back({Eigen::Vector3d(0, 1, 0), 2.0, Region{0, 56, w, h}});
  spec.planes.push_back({Eigen::Vector3d(0.0, -0.4, std::sqrt(1.0 - 0.16)), 2.0,
                         Region{48, 54, 80, 86}});
  return spec;
}

}  // namespace

SceneSpec preset_scene(std::string_view name) {
  if (name == "single-plane") return make_single_plane();
  if (name == "wedge") return make_wedge();
  if (name == "staircase") return make_staircase();
  if (name == "box-on-ground") return make_box_on_ground();
  throw std::invalid_argument("preset_scene: unknown preset '" + std::string(name) + "'");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"single-plane", "wedge", "staircase",
                                                 "box-on-ground"};
  return names;
}

}  // namespace podc
