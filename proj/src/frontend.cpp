#include "podc/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace podc {
namespace {

struct SeedList {
  std::vector<int> u;
  std::vector<int> v;
  std::vector<double> value;

  std::size_t size() const { return value.size(); }
};

SeedList collect_seeds(const DepthMap& seeds) {
  SeedList list;
  for (int v = 0; v < seeds.rows(); ++v) {
    for (int u = 0; u < seeds.cols(); ++u) {
      if (!is_valid(seeds.at(v, u))) continue;
      list.u.push_back(u);
      list.v.push_back(v);
      list.value.push_back(seeds.at(v, u));
    }
  }
  return list;
}

// IDW over the k nearest seeds, optionally skipping one seed index
// (leave-one-out). Candidates are ordered by (distance^2, seed index) so the
// selection and the summation order are deterministic.
double idw_at(const SeedList& seeds, int u, int v, int k, double power, int skip,
              std::vector<std::pair<double, int>>& scratch) {
  scratch.clear();
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    if (static_cast<int>(s) == skip) continue;
    const double du = static_cast<double>(seeds.u[s] - u);
    const double dv = static_cast<double>(seeds.v[s] - v);
    scratch.emplace_back(du * du + dv * dv, static_cast<int>(s));
  }
  const std::size_t take = std::min<std::size_t>(k, scratch.size());
  std::partial_sort(scratch.begin(), scratch.begin() + take, scratch.end());

  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < take; ++i) {
    const auto& [dist2, s] = scratch[i];
    if (dist2 == 0.0) return seeds.value[s];  // distance-0 seed dominates
    const double w = std::pow(dist2, -0.5 * power);
    weighted += w * seeds.value[s];
    total += w;
  }
  return weighted / total;
}

void check_idw_args(const SeedList& seeds, int k, const char* op) {
  if (seeds.size() == 0) {
    throw std::invalid_argument(std::string(op) + ": no valid seeds");
  }
  if (k < 1) {
    throw std::invalid_argument(std::string(op) + ": k must be >= 1");
  }
}

}  // namespace

DepthMap coarse_from_sparse(const DepthMap& seeds, int k, double power) {
  const SeedList list = collect_seeds(seeds);
  check_idw_args(list, k, "coarse_from_sparse");

  DepthMap dense(seeds.rows(), seeds.cols(), 0.0);
  std::vector<std::pair<double, int>> scratch;
  scratch.reserve(list.size());
  for (int v = 0; v < seeds.rows(); ++v) {
    for (int u = 0; u < seeds.cols(); ++u) {
      if (is_valid(seeds.at(v, u))) {
        dense.at(v, u) = seeds.at(v, u);
      } else {
        dense.at(v, u) = idw_at(list, u, v, k, power, -1, scratch);
      }
    }
  }
  return dense;
}

DepthMap leave_one_out_prediction(const DepthMap& seeds, int k, double power) {
  const SeedList list = collect_seeds(seeds);
  check_idw_args(list, k, "leave_one_out_prediction");

  DepthMap out(seeds.rows(), seeds.cols(), 0.0);
  std::vector<std::pair<double, int>> scratch;
  scratch.reserve(list.size());
  for (std::size_t s = 0; s < list.size(); ++s) {
    if (list.size() == 1) {
      out.at(list.v[s], list.u[s]) = list.value[s];
      continue;
    }
    out.at(list.v[s], list.u[s]) =
        idw_at(list, list.u[s], list.v[s], k, power, static_cast<int>(s), scratch);
  }
  return out;
}

NormalMap estimate_normals(const DepthMap& depth, const Intrinsics& intrinsics,
                           int window_radius) {
  if (depth.rows() != intrinsics.height || depth.cols() != intrinsics.width) {
    throw std::invalid_argument("estimate_normals: depth grid does not match intrinsics");
  }
  if (window_radius < 1) {
    throw std::invalid_argument("estimate_normals: window radius must be >= 1");
  }

  const RayGrid rays = ray_grid(intrinsics);
  NormalMap normals(depth.rows(), depth.cols(), Eigen::Vector3d::Zero());
  Grid<unsigned char> valid(depth.rows(), depth.cols(), 0);

  for (int v = 0; v < depth.rows(); ++v) {
    for (int u = 0; u < depth.cols(); ++u) {
      Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
      int count = 0;
      for (int dv = -window_radius; dv <= window_radius; ++dv) {
        for (int du = -window_radius; du <= window_radius; ++du) {
          if (!depth.in_bounds(v + dv, u + du)) continue;
          const double d = depth.at(v + dv, u + du);
          if (!is_valid(d)) continue;
          centroid += d * rays.at(v + dv, u + du);
          ++count;
        }
      }
      if (count < 3) continue;
      centroid /= count;

      Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
      for (int dv = -window_radius; dv <= window_radius; ++dv) {
        for (int du = -window_radius; du <= window_radius; ++du) {
          if (!depth.in_bounds(v + dv, u + du)) continue;
          const double d = depth.at(v + dv, u + du);
          if (!is_valid(d)) continue;
          const Eigen::Vector3d diff = d * rays.at(v + dv, u + du) - centroid;
          covariance += diff * diff.transpose();
        }
      }

      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(covariance);
      Eigen::Vector3d normal = solver.eigenvectors().col(0);  // smallest eigenvalue
      const double ray_dot = normal.dot(rays.at(v, u));
      if (ray_dot == 0.0) continue;  // sign ambiguous, treat as missing
      if (ray_dot < 0.0) normal = -normal;
      normals.at(v, u) = normal;
      valid.at(v, u) = 1;
    }
  }

  // Fill pixels the fit could not handle from the nearest estimated pixel.
  std::vector<std::size_t> good;
  for (std::size_t i = 0; i < valid.size(); ++i) {
    if (valid[i]) good.push_back(i);
  }
  if (good.empty()) {
    throw std::invalid_argument("estimate_normals: no pixel had 3 valid points in its window");
  }
  for (int v = 0; v < depth.rows(); ++v) {
    for (int u = 0; u < depth.cols(); ++u) {
      if (valid.at(v, u)) continue;
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_idx = good.front();
      for (std::size_t idx : good) {
        const double gu = static_cast<double>(idx % depth.cols());
        const double gv = static_cast<double>(idx / depth.cols());
        const double d2 = (gu - u) * (gu - u) + (gv - v) * (gv - v);
        if (d2 < best) {
          best = d2;
          best_idx = idx;
        }
      }
      normals.at(v, u) = normals[best_idx];
    }
  }
  return normals;
}

ConfidenceMap confidence_from_residual(const DepthMap& seeds, const DepthMap& reference,
                                       double b) {
  if (!(b > 0.0)) {
    throw std::invalid_argument("confidence_from_residual: b must be positive");
  }
  if (!seeds.same_size(reference)) {
    throw std::invalid_argument("confidence_from_residual: maps differ in size");
  }
  ConfidenceMap confidence(seeds.rows(), seeds.cols(), 0.0);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!is_valid(seeds[i])) continue;
    const double residual = seeds[i] - reference[i];
    confidence[i] = std::exp(-(residual * residual) / (2.0 * b * b));
  }
  return confidence;
}

FeatureGrid build_guidance(const DepthMap& depth, const NormalMap& normals, double depth_max) {
  if (!(depth_max > 0.0)) {
    throw std::invalid_argument("build_guidance: depth_max must be positive");
  }
  if (!depth.same_size(normals)) {
    throw std::invalid_argument("build_guidance: depth and normal maps differ in size");
  }

  const auto clamp_unit = [](double x) { return std::clamp(x, -1.0, 1.0); };
  FeatureGrid features(depth.rows(), depth.cols(), kGuidanceChannels);
  for (int v = 0; v < depth.rows(); ++v) {
    for (int u = 0; u < depth.cols(); ++u) {
      auto f = features.at(v, u);
      const Eigen::Vector3d& n = normals.at(v, u);
      f[0] = clamp_unit(static_cast<double>(u) / depth.cols());
      f[1] = clamp_unit(static_cast<double>(v) / depth.rows());
      f[2] = clamp_unit(depth.at(v, u) / depth_max);
      f[3] = clamp_unit(n.x());
      f[4] = clamp_unit(n.y());
      f[5] = clamp_unit(n.z());
    }
  }
  return features;
}

}  // namespace podc
