#pragma once

#include <Eigen/Core>

#include "podc/grid.hpp"

namespace podc {

/// Pinhole intrinsics for a width×height pixel grid. Pixel centers sit at
/// integer coordinates (u = column, v = row); no skew, no distortion.
struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  /// Throws std::invalid_argument if focal lengths are non-positive or the
  /// principal point lies outside the grid.
  void validate() const;
};

using RayGrid = Grid<Eigen::Vector3d>;

/// Viewing ray of pixel (u, v): ((u-cx)/fx, (v-cy)/fy, 1).
Eigen::Vector3d pixel_ray(const Intrinsics& intrinsics, double u, double v);

/// Per-pixel viewing rays; r(v, u).z() == 1 everywhere.
RayGrid ray_grid(const Intrinsics& intrinsics);

/// 3D point at depth `depth` along the pixel's ray; the z coordinate equals
/// `depth` exactly. Throws std::invalid_argument for depth <= 0.
Eigen::Vector3d backproject(const Intrinsics& intrinsics, PixelIndex pixel, double depth);

/// Pixel coordinates (u, v) of a camera-frame point with positive z.
Eigen::Vector2d project(const Intrinsics& intrinsics, const Eigen::Vector3d& point);

}  // namespace podc
