#pragma once

#include <array>
#include <string>

#include "podc/grid.hpp"

namespace podc {

/// Depth-completion error metrics over the intersection of the valid masks.
/// Depth errors are reported in millimeters, inverse-depth errors in 1/km
/// (KITTI conventions); rel is dimensionless and the delta thresholds are
/// percentages.
struct MetricReport {
  double rmse = 0.0;   // mm
  double mae = 0.0;    // mm
  double irmse = 0.0;  // 1/km
  double imae = 0.0;   // 1/km
  double rel = 0.0;
  std::array<double, 3> delta{0.0, 0.0, 0.0};  // thresholds 1.25, 1.25^2, 1.25^3
  long long pixel_count = 0;
};

inline constexpr std::array<double, 3> kDeltaThresholds{1.25, 1.25 * 1.25, 1.25 * 1.25 * 1.25};

/// Throws std::invalid_argument on a size mismatch or when no pixel is valid
/// in both maps.
MetricReport evaluate(const DepthMap& prediction, const DepthMap& ground_truth);

/// Pixels the prediction failed to fill: ground truth valid, prediction not.
long long count_missing_predictions(const DepthMap& prediction, const DepthMap& ground_truth);

/// Run metadata for one benchmark CSV row.
struct RunLabel {
  std::string scene;
  std::string variant;
  int kernel = 0;
  int iterations = 0;
  long long seeds = 0;
  double noise = 0.0;
};

std::string metrics_csv_header();
std::string metrics_csv_row(const RunLabel& label, const MetricReport& report);

}  // namespace podc
