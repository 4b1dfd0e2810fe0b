#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "podc/config.hpp"
#include "podc/frontend.hpp"
#include "podc/grid.hpp"
#include "podc/metrics.hpp"
#include "podc/scene.hpp"

namespace podc {

/// Everything the refinement stage consumes for one scene, produced
/// deterministically from the experiment config and its seed.
struct ScenarioInputs {
  SceneSpec spec;
  RenderedScene truth;
  DepthMap seeds;
  DepthMap coarse;
  NormalMap normals;
  ConfidenceMap confidence;
  FeatureGrid guidance;
  double depth_max = 0.0;
  long long seed_count = 0;
};

/// Renders, samples, optionally corrupts, and runs the frontend for one
/// scene. Sub-stream seeds depend only on (config.seed, scene_index), so
/// sweep points that keep the sampling parameters share identical inputs and
/// sparsity sweeps stay nested. Seed confidence is computed against a
/// leave-one-out prediction so a seed never scores itself.
ScenarioInputs prepare_scenario(const SceneSpec& spec, const ExperimentConfig& config,
                                int scene_index);

struct BenchOptions {
  std::filesystem::path config_path;
  std::optional<std::filesystem::path> out_dir;  // overrides the config's output dir
  std::optional<std::uint64_t> seed_override;
  bool quiet = false;
  bool write_images = true;
};

/// Executes the config (expanding sweep declarations into one run per point)
/// and writes metrics.csv plus depth/confidence images. Returns the process
/// exit code: 0 on success, 2 on config errors, 1 on pipeline errors.
int run_experiment(const BenchOptions& options);

/// Runs the seven-variant ablation suite (full, no-refinement,
/// no-replacement, no-confidence, symmetric-cosine, euclidean, dot-product)
/// on every scene of the config; sweep declarations are ignored. One CSV row
/// per (scene, variant).
int run_ablation_suite(const BenchOptions& options);

}  // namespace podc
