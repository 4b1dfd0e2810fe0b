#include "podc/plane_origin.hpp"

#include <stdexcept>
#include <string>

namespace podc {
namespace {

void require_grid_match(int rows, int cols, const Intrinsics& intrinsics, const char* op) {
  if (rows != intrinsics.height || cols != intrinsics.width) {
    throw std::invalid_argument(std::string(op) + ": map is " + std::to_string(cols) + "x" +
                                std::to_string(rows) + " but intrinsics describe " +
                                std::to_string(intrinsics.width) + "x" +
                                std::to_string(intrinsics.height));
  }
}

}  // namespace

PlaneOriginMap depth_to_plane_origin(const DepthMap& depth, const NormalMap& normals,
                                     const Intrinsics& intrinsics, double eps_ray) {
  if (!depth.same_size(normals)) {
    throw std::invalid_argument("depth_to_plane_origin: depth and normal maps differ in size");
  }
  require_grid_match(depth.rows(), depth.cols(), intrinsics, "depth_to_plane_origin");

  PlaneOriginMap result(depth.rows(), depth.cols(), 0.0);
  for (int v = 0; v < depth.rows(); ++v) {
    for (int u = 0; u < depth.cols(); ++u) {
      const double d = depth.at(v, u);
      if (!is_valid(d)) continue;
      const double ray_dot = normals.at(v, u).dot(pixel_ray(intrinsics, u, v));
      if (ray_dot < eps_ray) continue;  // grazing or back-facing: invalid
      result.at(v, u) = d * ray_dot;
    }
  }
  return result;
}

DepthMap plane_origin_to_depth(const PlaneOriginMap& plane_origin, const NormalMap& normals,
                               const Intrinsics& intrinsics, double eps_ray) {
  if (!plane_origin.same_size(normals)) {
    throw std::invalid_argument("plane_origin_to_depth: maps differ in size");
  }
  require_grid_match(plane_origin.rows(), plane_origin.cols(), intrinsics, "plane_origin_to_depth");

  DepthMap result(plane_origin.rows(), plane_origin.cols(), 0.0);
  for (int v = 0; v < plane_origin.rows(); ++v) {
    for (int u = 0; u < plane_origin.cols(); ++u) {
      const double p = plane_origin.at(v, u);
      if (!is_valid(p)) continue;
      const double ray_dot = normals.at(v, u).dot(pixel_ray(intrinsics, u, v));
      if (ray_dot < eps_ray) continue;
      result.at(v, u) = p / ray_dot;
    }
  }
  return result;
}

}  // namespace podc
