#include "podc/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace podc {

MetricReport evaluate(const DepthMap& prediction, const DepthMap& ground_truth) {
  if (!prediction.same_size(ground_truth)) {
    throw std::invalid_argument("evaluate: maps differ in size");
  }

  MetricReport report;
  double sum_sq = 0.0;
  double sum_abs = 0.0;
  double sum_inv_sq = 0.0;
  double sum_inv_abs = 0.0;
  double sum_rel = 0.0;
  std::array<long long, 3> within{0, 0, 0};

  for (std::size_t i = 0; i < prediction.size(); ++i) {
    const double d = prediction[i];
    const double gt = ground_truth[i];
    if (!is_valid(d) || !is_valid(gt)) continue;
    ++report.pixel_count;

    const double err = d - gt;
    sum_sq += err * err;
    sum_abs += std::abs(err);
    const double inv_err = 1.0 / d - 1.0 / gt;
    sum_inv_sq += inv_err * inv_err;
    sum_inv_abs += std::abs(inv_err);
    sum_rel += std::abs(err) / gt;
    const double ratio = std::max(d / gt, gt / d);
    for (std::size_t t = 0; t < kDeltaThresholds.size(); ++t) {
      if (ratio < kDeltaThresholds[t]) ++within[t];
    }
  }

  if (report.pixel_count == 0) {
    throw std::invalid_argument("evaluate: no pixel is valid in both maps");
  }

  const double n = static_cast<double>(report.pixel_count);
  report.rmse = std::sqrt(sum_sq / n) * 1000.0;      // m -> mm
  report.mae = sum_abs / n * 1000.0;                 // m -> mm
  report.irmse = std::sqrt(sum_inv_sq / n) * 1000.0; // 1/m -> 1/km
  report.imae = sum_inv_abs / n * 1000.0;
  report.rel = sum_rel / n;
  for (std::size_t t = 0; t < within.size(); ++t) {
    report.delta[t] = 100.0 * static_cast<double>(within[t]) / n;
  }
  return report;
}

long long count_missing_predictions(const DepthMap& prediction, const DepthMap& ground_truth) {
  if (!prediction.same_size(ground_truth)) {
    throw std::invalid_argument("count_missing_predictions: maps differ in size");
  }
  long long missing = 0;
  for (std::size_t i = 0; i < prediction.size(); ++i) {
    if (is_valid(ground_truth[i]) && !is_valid(prediction[i])) ++missing;
  }
  return missing;
}

std::string metrics_csv_header() {
  return "scene,variant,kernel,iterations,seeds,noise,rmse,mae,irmse,imae,rel,d1,d2,d3,pixels";
}

std::string metrics_csv_row(const RunLabel& label, const MetricReport& report) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer),
                "%s,%s,%d,%d,%lld,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%lld",
                label.scene.c_str(), label.variant.c_str(), label.kernel, label.iterations,
                label.seeds, label.noise, report.rmse, report.mae, report.irmse, report.imae,
                report.rel, report.delta[0], report.delta[1], report.delta[2],
                report.pixel_count);
  return buffer;
}

}  // namespace podc
