#include "podc/camera.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace podc {

void Intrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw std::invalid_argument("Intrinsics: focal lengths must be positive, got fx=" +
                                std::to_string(fx) + " fy=" + std::to_string(fy));
  }
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("Intrinsics: grid size must be positive, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height)) {
    throw std::invalid_argument("Intrinsics: principal point (" + std::to_string(cx) + ", " +
                                std::to_string(cy) + ") outside " + std::to_string(width) + "x" +
                                std::to_string(height) + " grid");
  }
}

Eigen::Vector3d pixel_ray(const Intrinsics& intrinsics, double u, double v) {
  return {(u - intrinsics.cx) / intrinsics.fx, (v - intrinsics.cy) / intrinsics.fy, 1.0};
}

RayGrid ray_grid(const Intrinsics& intrinsics) {
  intrinsics.validate();
  RayGrid rays(intrinsics.height, intrinsics.width);
  for (int v = 0; v < intrinsics.height; ++v) {
    for (int u = 0; u < intrinsics.width; ++u) {
      rays.at(v, u) = pixel_ray(intrinsics, u, v);
    }
  }
  return rays;
}

Eigen::Vector3d backproject(const Intrinsics& intrinsics, PixelIndex pixel, double depth) {
  if (!(depth > 0.0) || !std::isfinite(depth)) {
    throw std::invalid_argument("backproject: depth must be positive and finite, got " +
                                std::to_string(depth));
  }
  return depth * pixel_ray(intrinsics, pixel.u, pixel.v);
}

Eigen::Vector2d project(const Intrinsics& intrinsics, const Eigen::Vector3d& point) {
  if (!(point.z() > 0.0)) {
    throw std::invalid_argument("project: point must lie in front of the camera");
  }
  return {intrinsics.fx * point.x() / point.z() + intrinsics.cx,
          intrinsics.fy * point.y() / point.z() + intrinsics.cy};
}

}  // namespace podc
