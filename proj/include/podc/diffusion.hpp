#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "podc/camera.hpp"
#include "podc/grid.hpp"
#include "podc/plane_origin.hpp"

namespace podc {

enum class ConductanceVariant {
  kAsymmetricCosine,  // full model: cos(f(G_i), g(G_j)) / temperature
  kSymmetricCosine,   // same, but g shares f's coefficients
  kEuclidean,         // -|f(G_i) - g(G_j)|^2 / (2 sigma^2)
  kDotProduct,        // f(G_i) . g(G_j)
};

ConductanceVariant parse_variant(std::string_view name);
std::string to_string(ConductanceVariant variant);

struct DiffusionConfig {
  int kernel = 5;      // odd window size, >= 3
  int iterations = 8;  // >= 0
  ConductanceVariant variant = ConductanceVariant::kAsymmetricCosine;
  double sigma = 1.0;        // spread of the euclidean affinity
  double temperature = 0.1;  // scale inside the cosine affinity
  bool use_replacement = true;
  bool use_confidence = true;
  double eps_ray = kDefaultEpsRay;

  void validate() const;
};

/// The pair of linear feature transforms entering the conductance function.
/// Empty matrices act as the identity. The symmetric-cosine variant always
/// evaluates g with f's coefficients.
class AffinityTransforms {
 public:
  AffinityTransforms() = default;

  static AffinityTransforms identity() { return {}; }
  static AffinityTransforms from_matrices(Eigen::MatrixXd f, Eigen::MatrixXd g);
  /// Single shared transform (f = g).
  static AffinityTransforms shared(Eigen::MatrixXd f);

  /// The same transforms with f and g exchanged.
  AffinityTransforms swapped() const;

  Eigen::VectorXd apply_f(std::span<const double> features) const;
  Eigen::VectorXd apply_g(std::span<const double> features) const;

  bool f_is_identity() const { return f_.size() == 0; }
  bool g_is_identity() const { return g_.size() == 0; }
  const Eigen::MatrixXd& f() const { return f_; }
  const Eigen::MatrixXd& g() const { return g_; }

 private:
  static Eigen::VectorXd apply(const Eigen::MatrixXd& m, std::span<const double> features,
                               const char* which);

  Eigen::MatrixXd f_;  // E x F; empty = identity
  Eigen::MatrixXd g_;
};

/// Normalized conductance weights of `center` against `neighbors`: a softmax
/// over the per-pair affinities of the configured variant. Weights are
/// non-negative and sum to 1. A zero-norm embedding under the cosine variants
/// contributes cosine 0 for its pairs.
std::vector<double> conductance_weights(const FeatureGrid& guidance, PixelIndex center,
                                        std::span<const PixelIndex> neighbors,
                                        const DiffusionConfig& config,
                                        const AffinityTransforms& transforms);

/// One diffusion step: each pixel becomes the conductance-weighted average of
/// the valid plane-origin values in its kernel×kernel window (the center
/// itself included when valid); weights are renormalized over the valid
/// subset. Pixels with no valid neighbor stay invalid. Double-buffered: all
/// reads come from the input map.
PlaneOriginMap diffuse_step(const PlaneOriginMap& plane_origin, const FeatureGrid& guidance,
                            const DiffusionConfig& config, const AffinityTransforms& transforms);

/// Confidence-gated seed re-imposition: where a seed exists (seeds > 0),
/// out = M*seed + (1-M)*current; elsewhere the current value passes through.
PlaneOriginMap replace_seeds(const PlaneOriginMap& current, const PlaneOriginMap& seeds,
                             const ConfidenceMap& confidence);

/// Full refinement: transform coarse depth and seeds to plane-origin
/// distances, run `iterations` rounds of seed replacement followed by one
/// diffusion step, and transform back to depth. With use_replacement off the
/// replacement is skipped; with use_confidence off the confidence map is
/// treated as all-ones.
DepthMap refine(const DepthMap& coarse, const DepthMap& seeds, const NormalMap& normals,
                const ConfidenceMap& confidence, const Intrinsics& intrinsics,
                const FeatureGrid& guidance, const DiffusionConfig& config,
                const AffinityTransforms& transforms);

enum class Ablation {
  kFull,
  kNoRefinement,   // return the coarse depth unchanged
  kNoReplacement,  // diffusion without seed re-imposition
  kNoConfidence,   // seeds re-imposed at full confidence
  kSymmetricCosine,
  kEuclidean,
  kDotProduct,
};

Ablation parse_ablation(std::string_view name);
std::string to_string(Ablation ablation);

/// Runs refine with one component disabled or a conductance variant swapped.
DepthMap ablate(Ablation ablation, const DepthMap& coarse, const DepthMap& seeds,
                const NormalMap& normals, const ConfidenceMap& confidence,
                const Intrinsics& intrinsics, const FeatureGrid& guidance,
                const DiffusionConfig& config, const AffinityTransforms& transforms);

}  // namespace podc
