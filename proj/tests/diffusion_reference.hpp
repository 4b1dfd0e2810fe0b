#pragma once

// Independent brute-force reference for the diffusion step. Everything is
// recomputed from first principles with naive loops: feature transforms by
// explicit matrix-vector products, affinities per variant, an unstabilized
// softmax over the valid window, and a plain weighted sum. It deliberately
// shares no code with podc::diffuse_step.

#include <cmath>
#include <vector>

#include "podc/diffusion.hpp"
#include "podc/grid.hpp"

namespace podc_test {

inline std::vector<double> reference_embed(const podc::FeatureGrid& guidance, int v, int u,
                                           const Eigen::MatrixXd& matrix) {
  const auto features = guidance.at(v, u);
  if (matrix.size() == 0) {
    return std::vector<double>(features.begin(), features.end());
  }
  std::vector<double> out(static_cast<std::size_t>(matrix.rows()), 0.0);
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    double sum = 0.0;
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      sum += matrix(r, c) * features[static_cast<std::size_t>(c)];
    }
    out[static_cast<std::size_t>(r)] = sum;
  }
  return out;
}

inline double reference_affinity(const std::vector<double>& a, const std::vector<double>& b,
                                 const podc::DiffusionConfig& cfg) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  double dist2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
    dist2 += (a[i] - b[i]) * (a[i] - b[i]);
  }
  switch (cfg.variant) {
    case podc::ConductanceVariant::kAsymmetricCosine:
    case podc::ConductanceVariant::kSymmetricCosine: {
      double cosine = 0.0;
      if (na > 0.0 && nb > 0.0) cosine = dot / (std::sqrt(na) * std::sqrt(nb));
      return cosine / cfg.temperature;
    }
    case podc::ConductanceVariant::kEuclidean:
      return -dist2 / (2.0 * cfg.sigma * cfg.sigma);
    case podc::ConductanceVariant::kDotProduct:
      return dot;
  }
  return 0.0;
}

inline podc::PlaneOriginMap reference_diffuse(const podc::PlaneOriginMap& plane_origin,
                                              const podc::FeatureGrid& guidance,
                                              const podc::DiffusionConfig& cfg,
                                              const podc::AffinityTransforms& transforms) {
  const Eigen::MatrixXd& f = transforms.f();
  const Eigen::MatrixXd& g =
      cfg.variant == podc::ConductanceVariant::kSymmetricCosine ? transforms.f() : transforms.g();

  podc::PlaneOriginMap out(plane_origin.rows(), plane_origin.cols(), 0.0);
  const int radius = cfg.kernel / 2;
  for (int v = 0; v < plane_origin.rows(); ++v) {
    for (int u = 0; u < plane_origin.cols(); ++u) {
      const std::vector<double> center = reference_embed(guidance, v, u, f);
      std::vector<double> exps;
      std::vector<double> values;
      for (int dv = -radius; dv <= radius; ++dv) {
        for (int du = -radius; du <= radius; ++du) {
          const int nv = v + dv;
          const int nu = u + du;
          if (nv < 0 || nv >= plane_origin.rows() || nu < 0 || nu >= plane_origin.cols()) continue;
          if (!(plane_origin.at(nv, nu) > 0.0)) continue;
          const std::vector<double> neighbor = reference_embed(guidance, nv, nu, g);
          exps.push_back(std::exp(reference_affinity(center, neighbor, cfg)));
          values.push_back(plane_origin.at(nv, nu));
        }
      }
      if (exps.empty()) continue;
      double total = 0.0;
      for (double e : exps) total += e;
      double result = 0.0;
      for (std::size_t i = 0; i < exps.size(); ++i) result += exps[i] / total * values[i];
      out.at(v, u) = result;
    }
  }
  return out;
}

}  // namespace podc_test
