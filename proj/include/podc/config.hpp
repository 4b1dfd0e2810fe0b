#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "podc/diffusion.hpp"
#include "podc/scene.hpp"

namespace podc {

struct NoiseParams {
  double outlier_frac = 0.0;
  double magnitude = 0.2;  // relative corruption of an outlier seed
};

struct FrontendParams {
  enum class Mode {
    kSynthetic,  // coarse = perturbed ground truth, normals = exact
    kClassical,  // coarse = IDW from seeds, normals = plane fit
  };

  Mode mode = Mode::kSynthetic;
  double perturb_amplitude = 0.1;  // synthetic mode
  int k = 8;                       // IDW neighbor count
  double power = 2.0;              // IDW distance exponent
  int normal_window = 2;           // plane-fit window radius
  double b = 0.1;                  // confidence tolerance, meters
  std::optional<double> depth_max; // guidance scale; scene z_max when absent
};

struct SweepDecl {
  std::string path;  // dotted key path, e.g. "diffusion.iterations"
  std::vector<nlohmann::json> values;
};

struct ExperimentConfig {
  std::vector<SceneSpec> scenes;
  SamplePattern sample;
  NoiseParams noise;
  FrontendParams frontend;
  DiffusionConfig diffusion;
  std::optional<Eigen::MatrixXd> transform_f;
  std::optional<Eigen::MatrixXd> transform_g;
  std::vector<SweepDecl> sweeps;
  std::string output_dir = "out";
  std::uint64_t seed = 0;

  AffinityTransforms transforms() const;
};

/// Parses and validates a config document. Unknown keys are collected into
/// `warnings` (when non-null) rather than treated as errors; invalid values
/// throw std::invalid_argument naming the offending key path.
ExperimentConfig parse_experiment_config(const nlohmann::json& document,
                                         std::vector<std::string>* warnings = nullptr);

/// Loads a config file. JSON syntax errors surface as std::runtime_error with
/// the parser's line/column message.
nlohmann::json load_config_document(const std::filesystem::path& path);

/// Applies one sweep assignment to a raw config document. The dotted path
/// must address an existing key.
void apply_sweep_value(nlohmann::json& document, const std::string& path,
                       const nlohmann::json& value);

/// Expands the document's sweep declarations into the cartesian product of
/// per-point documents (sweep keys removed), in declaration-major order.
/// A document without sweeps expands to itself. Each entry is paired with a
/// short "path=value" label list.
struct SweepPoint {
  nlohmann::json document;
  std::vector<std::string> assignments;
};
std::vector<SweepPoint> expand_sweeps(const nlohmann::json& document);

}  // namespace podc
