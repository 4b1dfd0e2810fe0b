#include "podc/bench.hpp"

#include <fstream>
#include <iostream>
#include <stdexcept>

#include "podc/depth_io.hpp"
#include "podc/diffusion.hpp"
#include "podc/rng.hpp"

namespace podc {
namespace {

// Sub-stream tags for deriving independent RNG streams per scene.
constexpr std::uint64_t kSampleStream = 0x53414D50;
constexpr std::uint64_t kNoiseStream = 0x4E4F4953;
constexpr std::uint64_t kPerturbStream = 0x50455254;

template <typename F>
auto stage(const char* name, const std::string& scene, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    throw std::runtime_error("stage '" + std::string(name) + "' failed on scene '" + scene +
                             "': " + e.what());
  }
}

void write_scenario_maps(const std::filesystem::path& dir, const std::string& tag,
                         const ScenarioInputs& inputs, const DepthMap& refined) {
  write_depth_png16(dir / (tag + "_gt.png"), inputs.truth.depth);
  write_depth_png16(dir / (tag + "_coarse.png"), inputs.coarse);
  write_depth_png16(dir / (tag + "_refined.png"), refined);
  write_unit_png16(dir / (tag + "_confidence.png"), inputs.confidence);
  write_float_map(dir / (tag + "_gt.f32"), inputs.truth.depth);
  write_float_map(dir / (tag + "_coarse.f32"), inputs.coarse);
  write_float_map(dir / (tag + "_refined.f32"), refined);
  write_float_map(dir / (tag + "_confidence.f32"), inputs.confidence);
}

struct LoadedConfig {
  nlohmann::json document;
  std::filesystem::path out_dir;
};

// Loads the config file, applies CLI overrides, prints warnings. Throws
// std::invalid_argument / std::runtime_error on config problems.
LoadedConfig load_and_prepare(const BenchOptions& options) {
  LoadedConfig loaded;
  loaded.document = load_config_document(options.config_path);
  if (options.seed_override) {
    loaded.document["seed"] = *options.seed_override;
  }
  std::vector<std::string> warnings;
  const ExperimentConfig parsed = parse_experiment_config(loaded.document, &warnings);
  for (const std::string& warning : warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  loaded.out_dir = options.out_dir.value_or(std::filesystem::path(parsed.output_dir));
  return loaded;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& rows) {
  std::ofstream csv(path, std::ios::trunc);
  if (!csv) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  csv << metrics_csv_header() << "\n";
  for (const std::string& row : rows) csv << row << "\n";
}

}  // namespace

ScenarioInputs prepare_scenario(const SceneSpec& spec, const ExperimentConfig& config,
                                int scene_index) {
  ScenarioInputs inputs;
  inputs.spec = spec;
  const std::string& name = spec.name;

  inputs.truth = stage("render", name, [&] { return render_scene(spec); });

  SamplePattern pattern = config.sample;
  pattern.seed = derive_seed(config.seed, kSampleStream + static_cast<std::uint64_t>(scene_index));
  inputs.seeds = stage("sample", name, [&] { return sample_sparse(inputs.truth.depth, pattern); });
  if (config.noise.outlier_frac > 0.0) {
    inputs.seeds = stage("noise", name, [&] {
      return inject_noise(inputs.seeds, config.noise.outlier_frac, config.noise.magnitude,
                          derive_seed(config.seed,
                                      kNoiseStream + static_cast<std::uint64_t>(scene_index)));
    });
  }

  const FrontendParams& fe = config.frontend;
  if (fe.mode == FrontendParams::Mode::kSynthetic) {
    inputs.coarse = stage("perturb", name, [&] {
      return perturb_depth(inputs.truth.depth, fe.perturb_amplitude,
                           derive_seed(config.seed,
                                       kPerturbStream + static_cast<std::uint64_t>(scene_index)));
    });
    inputs.normals = inputs.truth.normals;
  } else {
    inputs.coarse =
        stage("coarse", name, [&] { return coarse_from_sparse(inputs.seeds, fe.k, fe.power); });
    inputs.normals = stage("normals", name, [&] {
      return estimate_normals(inputs.coarse, spec.intrinsics, fe.normal_window);
    });
  }

  inputs.confidence = stage("confidence", name, [&] {
    DepthMap reference = inputs.coarse;
    const DepthMap loo = leave_one_out_prediction(inputs.seeds, fe.k, fe.power);
    for (std::size_t i = 0; i < reference.size(); ++i) {
      if (is_valid(inputs.seeds[i])) reference[i] = loo[i];
    }
    return confidence_from_residual(inputs.seeds, reference, fe.b);
  });

  inputs.depth_max = fe.depth_max.value_or(spec.z_max);
  inputs.guidance = stage("guidance", name, [&] {
    return build_guidance(inputs.coarse, inputs.normals, inputs.depth_max);
  });
  inputs.seed_count = static_cast<long long>(count_valid(inputs.seeds));
  return inputs;
}

int run_experiment(const BenchOptions& options) {
  LoadedConfig loaded;
  std::vector<SweepPoint> points;
  try {
    loaded = load_and_prepare(options);
    points = expand_sweeps(loaded.document);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const std::filesystem::path maps_dir = loaded.out_dir / "maps";
    std::filesystem::create_directories(maps_dir);

    std::vector<std::string> rows;
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
      const ExperimentConfig config = parse_experiment_config(points[pi].document, nullptr);
      const AffinityTransforms transforms = config.transforms();
      for (std::size_t si = 0; si < config.scenes.size(); ++si) {
        const ScenarioInputs inputs =
            prepare_scenario(config.scenes[si], config, static_cast<int>(si));
        const std::string& name = inputs.spec.name;
        const DepthMap refined = stage("refine", name, [&] {
          return refine(inputs.coarse, inputs.seeds, inputs.normals, inputs.confidence,
                        inputs.spec.intrinsics, inputs.guidance, config.diffusion, transforms);
        });
        const MetricReport report =
            stage("evaluate", name, [&] { return evaluate(refined, inputs.truth.depth); });

        const RunLabel label{name, to_string(config.diffusion.variant), config.diffusion.kernel,
                             config.diffusion.iterations, inputs.seed_count,
                             config.noise.outlier_frac};
        rows.push_back(metrics_csv_row(label, report));
        if (!options.quiet) {
          std::cout << rows.back() << "  (missing-predictions: "
                    << count_missing_predictions(refined, inputs.truth.depth) << ")\n";
          for (const std::string& assignment : points[pi].assignments) {
            std::cout << "  # " << assignment << "\n";
          }
        }
        if (options.write_images) {
          std::string tag = name;
          if (points.size() > 1) tag += "_point" + std::to_string(pi);
          stage("io", name, [&] {
            write_scenario_maps(maps_dir, tag, inputs, refined);
            return 0;
          });
        }
      }
    }
    write_csv(loaded.out_dir / "metrics.csv", rows);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run_ablation_suite(const BenchOptions& options) {
  LoadedConfig loaded;
  ExperimentConfig config;
  try {
    loaded = load_and_prepare(options);
    nlohmann::json base = loaded.document;
    base.erase("sweep");
    config = parse_experiment_config(base, nullptr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  static const Ablation kSuite[] = {
      Ablation::kFull,           Ablation::kNoRefinement,  Ablation::kNoReplacement,
      Ablation::kNoConfidence,   Ablation::kSymmetricCosine, Ablation::kEuclidean,
      Ablation::kDotProduct,
  };

  try {
    std::filesystem::create_directories(loaded.out_dir);
    const AffinityTransforms transforms = config.transforms();
    std::vector<std::string> rows;
    for (std::size_t si = 0; si < config.scenes.size(); ++si) {
      const ScenarioInputs inputs =
          prepare_scenario(config.scenes[si], config, static_cast<int>(si));
      const std::string& name = inputs.spec.name;
      for (Ablation ablation : kSuite) {
        const DepthMap refined = stage("refine", name, [&] {
          return ablate(ablation, inputs.coarse, inputs.seeds, inputs.normals, inputs.confidence,
                        inputs.spec.intrinsics, inputs.guidance, config.diffusion, transforms);
        });
        const MetricReport report =
            stage("evaluate", name, [&] { return evaluate(refined, inputs.truth.depth); });
        const RunLabel label{name, to_string(ablation), config.diffusion.kernel,
                             config.diffusion.iterations, inputs.seed_count,
                             config.noise.outlier_frac};
        rows.push_back(metrics_csv_row(label, report));
        if (!options.quiet) std::cout << rows.back() << "\n";
      }
    }
    write_csv(loaded.out_dir / "metrics.csv", rows);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace podc
