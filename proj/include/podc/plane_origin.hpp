#pragma once

#include "podc/camera.hpp"
#include "podc/grid.hpp"

namespace podc {

/// Dot-product threshold below which a ray is treated as grazing the local
/// tangent plane; such pixels are marked invalid instead of dividing by a
/// near-zero denominator.
inline constexpr double kDefaultEpsRay = 1e-3;

/// Plane-origin distance P(x) = D(x) * N(x)·r(x), the distance from the
/// camera origin to the tangent plane through the pixel's 3D point. Invalid
/// depths stay invalid; pixels where N·r < eps_ray (grazing or back-facing)
/// are marked invalid. Normals must follow the N·r > 0 convention wherever
/// the depth is valid, which keeps every valid P strictly positive.
PlaneOriginMap depth_to_plane_origin(const DepthMap& depth, const NormalMap& normals,
                                     const Intrinsics& intrinsics, double eps_ray = kDefaultEpsRay);

/// Inverse transform D(x) = P(x) / (N(x)·r(x)). Pixels with invalid P or with
/// N·r < eps_ray come back invalid.
DepthMap plane_origin_to_depth(const PlaneOriginMap& plane_origin, const NormalMap& normals,
                               const Intrinsics& intrinsics, double eps_ray = kDefaultEpsRay);

}  // namespace podc
