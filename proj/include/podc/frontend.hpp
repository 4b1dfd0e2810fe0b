#pragma once

#include "podc/camera.hpp"
#include "podc/grid.hpp"

namespace podc {

inline constexpr int kGuidanceChannels = 6;

/// Dense depth from sparse seeds by inverse-distance weighting over the k
/// nearest seeds with weight (1/dist)^power. Seed pixels keep their value
/// exactly. Throws std::invalid_argument when no valid seed exists.
DepthMap coarse_from_sparse(const DepthMap& seeds, int k, double power);

/// IDW prediction at each seed pixel from the other seeds (leave-one-out);
/// 0 at non-seed pixels. With a single seed the seed's own value is returned.
/// The benchmark feeds the residual between this and the seeds into the
/// confidence model, so a seed is never validated by its own value.
DepthMap leave_one_out_prediction(const DepthMap& seeds, int k, double power);

/// Per-pixel unit normals from a least-squares plane fit over the
/// (2*window_radius+1)^2 back-projected neighborhood, sign-fixed so that
/// N·r > 0. Pixels with fewer than 3 valid points (or an ambiguous sign) are
/// filled from the nearest estimated pixel.
NormalMap estimate_normals(const DepthMap& depth, const Intrinsics& intrinsics, int window_radius);

/// Gaussian seed confidence M = exp(-(seed - reference)^2 / (2 b^2)) where a
/// seed exists, 0 elsewhere. b is the residual tolerance in meters: large b
/// tolerates noisy seeds, small b trusts only near-exact agreement.
ConfidenceMap confidence_from_residual(const DepthMap& seeds, const DepthMap& reference, double b);

/// Hand-crafted guidance feature stack (6 channels): normalized pixel
/// coordinates u/W and v/H, depth scaled by 1/depth_max, and the three
/// normal components. Every channel is clamped to [-1, 1].
FeatureGrid build_guidance(const DepthMap& depth, const NormalMap& normals, double depth_max);

}  // namespace podc
