#include "podc/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace podc {

ConductanceVariant parse_variant(std::string_view name) {
  if (name == "asymmetric-cosine") return ConductanceVariant::kAsymmetricCosine;
  if (name == "symmetric-cosine") return ConductanceVariant::kSymmetricCosine;
  if (name == "euclidean") return ConductanceVariant::kEuclidean;
  if (name == "dot-product") return ConductanceVariant::kDotProduct;
  throw std::invalid_argument("unknown conductance variant '" + std::string(name) + "'");
}

std::string to_string(ConductanceVariant variant) {
  switch (variant) {
    case ConductanceVariant::kAsymmetricCosine: return "asymmetric-cosine";
    case ConductanceVariant::kSymmetricCosine: return "symmetric-cosine";
    case ConductanceVariant::kEuclidean: return "euclidean";
    case ConductanceVariant::kDotProduct: return "dot-product";
  }
  return "unknown";
}

void DiffusionConfig::validate() const {
  if (kernel < 3 || kernel % 2 == 0) {
    throw std::invalid_argument("DiffusionConfig: kernel must be odd and >= 3, got " +
                                std::to_string(kernel));
  }
  if (iterations < 0) {
    throw std::invalid_argument("DiffusionConfig: iterations must be >= 0");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("DiffusionConfig: sigma must be positive");
  }
  if (!(temperature > 0.0)) {
    throw std::invalid_argument("DiffusionConfig: temperature must be positive");
  }
  if (!(eps_ray > 0.0)) {
    throw std::invalid_argument("DiffusionConfig: eps_ray must be positive");
  }
}

AffinityTransforms AffinityTransforms::from_matrices(Eigen::MatrixXd f, Eigen::MatrixXd g) {
  AffinityTransforms t;
  t.f_ = std::move(f);
  t.g_ = std::move(g);
  return t;
}

AffinityTransforms AffinityTransforms::shared(Eigen::MatrixXd f) {
  AffinityTransforms t;
  t.g_ = f;
  t.f_ = std::move(f);
  return t;
}

AffinityTransforms AffinityTransforms::swapped() const {
  AffinityTransforms t;
  t.f_ = g_;
  t.g_ = f_;
  return t;
}

Eigen::VectorXd AffinityTransforms::apply(const Eigen::MatrixXd& m,
                                          std::span<const double> features, const char* which) {
  Eigen::Map<const Eigen::VectorXd> x(features.data(), static_cast<Eigen::Index>(features.size()));
  if (m.size() == 0) return x;
  if (m.cols() != x.size()) {
    throw std::invalid_argument(std::string("AffinityTransforms: ") + which + " expects " +
                                std::to_string(m.cols()) + " feature channels, got " +
                                std::to_string(x.size()));
  }
  return m * x;
}

Eigen::VectorXd AffinityTransforms::apply_f(std::span<const double> features) const {
  return apply(f_, features, "f");
}

Eigen::VectorXd AffinityTransforms::apply_g(std::span<const double> features) const {
  return apply(g_, features, "g");
}

namespace {

double pair_affinity(ConductanceVariant variant, const Eigen::VectorXd& center_embed,
                     double center_norm, const Eigen::VectorXd& neighbor_embed,
                     double neighbor_norm, const DiffusionConfig& config) {
  switch (variant) {
    case ConductanceVariant::kAsymmetricCosine:
    case ConductanceVariant::kSymmetricCosine: {
      double cosine = 0.0;  // zero-norm embeddings get neutral affinity
      if (center_norm > 0.0 && neighbor_norm > 0.0) {
        cosine = center_embed.dot(neighbor_embed) / (center_norm * neighbor_norm);
      }
      return cosine / config.temperature;
    }
    case ConductanceVariant::kEuclidean:
      return -(center_embed - neighbor_embed).squaredNorm() / (2.0 * config.sigma * config.sigma);
    case ConductanceVariant::kDotProduct:
      return center_embed.dot(neighbor_embed);
  }
  return 0.0;
}

void softmax_in_place(std::vector<double>& affinities) {
  const double peak = *std::max_element(affinities.begin(), affinities.end());
  double total = 0.0;
  for (double& a : affinities) {
    a = std::exp(a - peak);
    total += a;
  }
  for (double& a : affinities) a /= total;
}

// Flattened per-pixel embeddings of the whole guidance grid, plus norms for
// the cosine variants.
struct EmbeddedGrid {
  Eigen::MatrixXd f;  // one row per pixel
  Eigen::MatrixXd g;
  Eigen::VectorXd f_norm;
  Eigen::VectorXd g_norm;
};

EmbeddedGrid embed_grid(const FeatureGrid& guidance, const DiffusionConfig& config,
                        const AffinityTransforms& transforms) {
  const bool share_f = config.variant == ConductanceVariant::kSymmetricCosine;
  const std::size_t pixels = static_cast<std::size_t>(guidance.rows()) * guidance.cols();

  EmbeddedGrid grid;
  const Eigen::VectorXd probe = transforms.apply_f(guidance.at(0, 0));
  const Eigen::Index ef = probe.size();
  const Eigen::Index eg = share_f ? ef : transforms.apply_g(guidance.at(0, 0)).size();
  grid.f.resize(static_cast<Eigen::Index>(pixels), ef);
  grid.g.resize(static_cast<Eigen::Index>(pixels), eg);

  Eigen::Index row = 0;
  for (int v = 0; v < guidance.rows(); ++v) {
    for (int u = 0; u < guidance.cols(); ++u, ++row) {
      grid.f.row(row) = transforms.apply_f(guidance.at(v, u));
      if (share_f) {
        grid.g.row(row) = grid.f.row(row);
      } else {
        grid.g.row(row) = transforms.apply_g(guidance.at(v, u));
      }
    }
  }
  grid.f_norm = grid.f.rowwise().norm();
  grid.g_norm = grid.g.rowwise().norm();
  return grid;
}

double embedded_affinity(ConductanceVariant variant, const EmbeddedGrid& grid, Eigen::Index i,
                         Eigen::Index j, const DiffusionConfig& config) {
  switch (variant) {
    case ConductanceVariant::kAsymmetricCosine:
    case ConductanceVariant::kSymmetricCosine: {
      double cosine = 0.0;
      if (grid.f_norm(i) > 0.0 && grid.g_norm(j) > 0.0) {
        cosine = grid.f.row(i).dot(grid.g.row(j)) / (grid.f_norm(i) * grid.g_norm(j));
      }
      return cosine / config.temperature;
    }
    case ConductanceVariant::kEuclidean:
      return -(grid.f.row(i) - grid.g.row(j)).squaredNorm() /
             (2.0 * config.sigma * config.sigma);
    case ConductanceVariant::kDotProduct:
      return grid.f.row(i).dot(grid.g.row(j));
  }
  return 0.0;
}

}  // namespace

std::vector<double> conductance_weights(const FeatureGrid& guidance, PixelIndex center,
                                        std::span<const PixelIndex> neighbors,
                                        const DiffusionConfig& config,
                                        const AffinityTransforms& transforms) {
  config.validate();
  if (neighbors.empty()) {
    throw std::invalid_argument("conductance_weights: neighborhood is empty");
  }
  if (!guidance.in_bounds(center.v, center.u)) {
    throw std::invalid_argument("conductance_weights: center pixel out of grid");
  }
  const bool share_f = config.variant == ConductanceVariant::kSymmetricCosine;

  const Eigen::VectorXd center_embed = transforms.apply_f(guidance.at(center.v, center.u));
  const double center_norm = center_embed.norm();

  std::vector<double> affinities;
  affinities.reserve(neighbors.size());
  for (const PixelIndex& n : neighbors) {
    if (!guidance.in_bounds(n.v, n.u)) {
      throw std::invalid_argument("conductance_weights: neighbor pixel out of grid");
    }
    const Eigen::VectorXd neighbor_embed = share_f ? transforms.apply_f(guidance.at(n.v, n.u))
                                                   : transforms.apply_g(guidance.at(n.v, n.u));
    affinities.push_back(pair_affinity(config.variant, center_embed, center_norm, neighbor_embed,
                                       neighbor_embed.norm(), config));
  }
  softmax_in_place(affinities);
  return affinities;
}

PlaneOriginMap diffuse_step(const PlaneOriginMap& plane_origin, const FeatureGrid& guidance,
                            const DiffusionConfig& config, const AffinityTransforms& transforms) {
  config.validate();
  if (!guidance.same_size(plane_origin)) {
    throw std::invalid_argument("diffuse_step: guidance and plane-origin grids differ in size");
  }
  if (plane_origin.empty()) return plane_origin;

  const EmbeddedGrid embedded = embed_grid(guidance, config, transforms);
  const int radius = config.kernel / 2;
  const int cols = plane_origin.cols();

  PlaneOriginMap next(plane_origin.rows(), plane_origin.cols(), 0.0);
  std::vector<double> affinities;
  std::vector<double> values;
  affinities.reserve(static_cast<std::size_t>(config.kernel) * config.kernel);
  values.reserve(affinities.capacity());

  for (int v = 0; v < plane_origin.rows(); ++v) {
    for (int u = 0; u < plane_origin.cols(); ++u) {
      affinities.clear();
      values.clear();
      const Eigen::Index i = static_cast<Eigen::Index>(v) * cols + u;
      for (int dv = -radius; dv <= radius; ++dv) {
        for (int du = -radius; du <= radius; ++du) {
          const int nv = v + dv;
          const int nu = u + du;
          if (!plane_origin.in_bounds(nv, nu)) continue;
          const double value = plane_origin.at(nv, nu);
          if (!is_valid(value)) continue;
          const Eigen::Index j = static_cast<Eigen::Index>(nv) * cols + nu;
          affinities.push_back(embedded_affinity(config.variant, embedded, i, j, config));
          values.push_back(value);
        }
      }
      if (affinities.empty()) continue;  // no valid neighbor: stays invalid
      softmax_in_place(affinities);
      double sum = 0.0;
      for (std::size_t t = 0; t < affinities.size(); ++t) sum += affinities[t] * values[t];
      next.at(v, u) = sum;
    }
  }
  return next;
}

PlaneOriginMap replace_seeds(const PlaneOriginMap& current, const PlaneOriginMap& seeds,
                             const ConfidenceMap& confidence) {
  if (!current.same_size(seeds) || !current.same_size(confidence)) {
    throw std::invalid_argument("replace_seeds: maps differ in size");
  }
  PlaneOriginMap out = current;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (seeds[i] > 0.0) {
      out[i] = confidence[i] * seeds[i] + (1.0 - confidence[i]) * current[i];
    }
  }
  return out;
}

DepthMap refine(const DepthMap& coarse, const DepthMap& seeds, const NormalMap& normals,
                const ConfidenceMap& confidence, const Intrinsics& intrinsics,
                const FeatureGrid& guidance, const DiffusionConfig& config,
                const AffinityTransforms& transforms) {
  config.validate();
  if (!coarse.same_size(seeds) || !coarse.same_size(normals) || !coarse.same_size(confidence) ||
      !guidance.same_size(coarse)) {
    throw std::invalid_argument("refine: input maps differ in size");
  }

  PlaneOriginMap current = depth_to_plane_origin(coarse, normals, intrinsics, config.eps_ray);
  const PlaneOriginMap seed_distances =
      depth_to_plane_origin(seeds, normals, intrinsics, config.eps_ray);

  const ConfidenceMap* effective = &confidence;
  ConfidenceMap all_ones;
  if (!config.use_confidence) {
    all_ones = ConfidenceMap(coarse.rows(), coarse.cols(), 1.0);
    effective = &all_ones;
  }

  for (int iteration = 0; iteration < config.iterations; ++iteration) {
    if (config.use_replacement) {
      current = replace_seeds(current, seed_distances, *effective);
    }
    current = diffuse_step(current, guidance, config, transforms);
  }
  return plane_origin_to_depth(current, normals, intrinsics, config.eps_ray);
}

Ablation parse_ablation(std::string_view name) {
  if (name == "full") return Ablation::kFull;
  if (name == "no-refinement") return Ablation::kNoRefinement;
  if (name == "no-replacement") return Ablation::kNoReplacement;
  if (name == "no-confidence") return Ablation::kNoConfidence;
  if (name == "symmetric-cosine") return Ablation::kSymmetricCosine;
  if (name == "euclidean") return Ablation::kEuclidean;
  if (name == "dot-product") return Ablation::kDotProduct;
  throw std::invalid_argument("unknown ablation '" + std::string(name) + "'");
}

std::string to_string(Ablation ablation) {
  switch (ablation) {
    case Ablation::kFull: return "full";
    case Ablation::kNoRefinement: return "no-refinement";
    case Ablation::kNoReplacement: return "no-replacement";
    case Ablation::kNoConfidence: return "no-confidence";
    case Ablation::kSymmetricCosine: return "symmetric-cosine";
    case Ablation::kEuclidean: return "euclidean";
    case Ablation::kDotProduct: return "dot-product";
  }
  return "unknown";
}

DepthMap ablate(Ablation ablation, const DepthMap& coarse, const DepthMap& seeds,
                const NormalMap& normals, const ConfidenceMap& confidence,
                const Intrinsics& intrinsics, const FeatureGrid& guidance,
                const DiffusionConfig& config, const AffinityTransforms& transforms) {
  DiffusionConfig variant_config = config;
  switch (ablation) {
    case Ablation::kFull:
      break;
    case Ablation::kNoRefinement:
      return coarse;
    case Ablation::kNoReplacement:
      variant_config.use_replacement = false;
      break;
    case Ablation::kNoConfidence:
      variant_config.use_confidence = false;
      break;
    case Ablation::kSymmetricCosine:
      variant_config.variant = ConductanceVariant::kSymmetricCosine;
      break;
    case Ablation::kEuclidean:
      variant_config.variant = ConductanceVariant::kEuclidean;
      break;
    case Ablation::kDotProduct:
      variant_config.variant = ConductanceVariant::kDotProduct;
      break;
  }
  return refine(coarse, seeds, normals, confidence, intrinsics, guidance, variant_config,
                transforms);
}

}  // namespace podc
