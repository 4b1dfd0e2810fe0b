#include "podc/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace podc {

using nlohmann::json;

namespace {

[[noreturn]] void bad_value(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config: " + path + ": " + what);
}

const json& require(const json& object, const std::string& key, const std::string& path) {
  if (!object.contains(key)) bad_value(path + "." + key, "missing required key");
  return object.at(key);
}

double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) bad_value(path, "expected a number");
  return value.get<double>();
}

int as_int(const json& value, const std::string& path) {
  if (!value.is_number_integer()) bad_value(path, "expected an integer");
  return value.get<int>();
}

std::string as_string(const json& value, const std::string& path) {
  if (!value.is_string()) bad_value(path, "expected a string");
  return value.get<std::string>();
}

bool as_bool(const json& value, const std::string& path) {
  if (!value.is_boolean()) bad_value(path, "expected a boolean");
  return value.get<bool>();
}

void warn_unknown_keys(const json& object, const std::set<std::string>& known,
                       const std::string& path, std::vector<std::string>* warnings) {
  if (!warnings || !object.is_object()) return;
  for (const auto& [key, value] : object.items()) {
    if (!known.contains(key)) {
      warnings->push_back("unknown config key '" + path + "." + key + "'");
    }
  }
}

Intrinsics parse_intrinsics(const json& node, const std::string& path,
                            std::vector<std::string>* warnings) {
  warn_unknown_keys(node, {"fx", "fy", "cx", "cy", "width", "height"}, path, warnings);
  Intrinsics K;
  K.fx = as_number(require(node, "fx", path), path + ".fx");
  K.fy = as_number(require(node, "fy", path), path + ".fy");
  K.cx = as_number(require(node, "cx", path), path + ".cx");
  K.cy = as_number(require(node, "cy", path), path + ".cy");
  K.width = as_int(require(node, "width", path), path + ".width");
  K.height = as_int(require(node, "height", path), path + ".height");
  try {
    K.validate();
  } catch (const std::exception& e) {
    bad_value(path, e.what());
  }
  return K;
}

SceneSpec parse_scene(const json& node, const std::string& path,
                      std::vector<std::string>* warnings) {
  if (node.is_string()) {
    return preset_scene(node.get<std::string>());
  }
  if (!node.is_object()) bad_value(path, "expected a preset name or a scene object");
  warn_unknown_keys(node, {"name", "planes", "intrinsics", "z_range"}, path, warnings);

  SceneSpec spec;
  spec.name = node.contains("name") ? as_string(node.at("name"), path + ".name") : "custom";
  spec.intrinsics = parse_intrinsics(require(node, "intrinsics", path), path + ".intrinsics",
                                     warnings);
  const json& z_range = require(node, "z_range", path);
  if (!z_range.is_array() || z_range.size() != 2) {
    bad_value(path + ".z_range", "expected [z_min, z_max]");
  }
  spec.z_min = as_number(z_range[0], path + ".z_range[0]");
  spec.z_max = as_number(z_range[1], path + ".z_range[1]");

  const json& planes = require(node, "planes", path);
  if (!planes.is_array() || planes.empty()) bad_value(path + ".planes", "expected a plane list");
  for (std::size_t i = 0; i < planes.size(); ++i) {
    const std::string plane_path = path + ".planes[" + std::to_string(i) + "]";
    const json& plane_node = planes[i];
    warn_unknown_keys(plane_node, {"normal", "offset", "region"}, plane_path, warnings);
    PlaneSpec plane;
    const json& normal = require(plane_node, "normal", plane_path);
    if (!normal.is_array() || normal.size() != 3) {
      bad_value(plane_path + ".normal", "expected [nx, ny, nz]");
    }
    plane.normal = Eigen::Vector3d(as_number(normal[0], plane_path + ".normal[0]"),
                                   as_number(normal[1], plane_path + ".normal[1]"),
                                   as_number(normal[2], plane_path + ".normal[2]"));
    plane.offset = as_number(require(plane_node, "offset", plane_path), plane_path + ".offset");
    if (plane_node.contains("region")) {
      const json& region = plane_node.at("region");
      warn_unknown_keys(region, {"u0", "v0", "u1", "v1"}, plane_path + ".region", warnings);
      plane.region = Region{as_int(require(region, "u0", plane_path), plane_path + ".region.u0"),
                            as_int(require(region, "v0", plane_path), plane_path + ".region.v0"),
                            as_int(require(region, "u1", plane_path), plane_path + ".region.u1"),
                            as_int(require(region, "v1", plane_path), plane_path + ".region.v1")};
    }
    spec.planes.push_back(plane);
  }
  try {
    spec.validate_and_normalize();
  } catch (const std::exception& e) {
    bad_value(path, e.what());
  }
  return spec;
}

Eigen::MatrixXd parse_matrix(const json& node, const std::string& path) {
  if (!node.is_array() || node.empty() || !node[0].is_array()) {
    bad_value(path, "expected a matrix as a list of rows");
  }
  const std::size_t rows = node.size();
  const std::size_t cols = node[0].size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!node[r].is_array() || node[r].size() != cols) {
      bad_value(path, "rows have inconsistent lengths");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          as_number(node[r][c], path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

}  // namespace

AffinityTransforms ExperimentConfig::transforms() const {
  return AffinityTransforms::from_matrices(transform_f.value_or(Eigen::MatrixXd()),
                                           transform_g.value_or(Eigen::MatrixXd()));
}

ExperimentConfig parse_experiment_config(const json& document,
                                         std::vector<std::string>* warnings) {
  if (!document.is_object()) {
    throw std::invalid_argument("config: top-level document must be an object");
  }
  warn_unknown_keys(document,
                    {"scene", "scenes", "sample", "noise", "frontend", "diffusion", "transforms",
                     "sweep", "output", "seed"},
                    "config", warnings);

  ExperimentConfig config;

  if (document.contains("scenes")) {
    const json& scenes = document.at("scenes");
    if (!scenes.is_array() || scenes.empty()) bad_value("config.scenes", "expected a list");
    for (std::size_t i = 0; i < scenes.size(); ++i) {
      config.scenes.push_back(
          parse_scene(scenes[i], "config.scenes[" + std::to_string(i) + "]", warnings));
    }
  } else if (document.contains("scene")) {
    config.scenes.push_back(parse_scene(document.at("scene"), "config.scene", warnings));
  } else {
    bad_value("config", "needs 'scene' or 'scenes'");
  }

  if (document.contains("sample")) {
    const json& node = document.at("sample");
    warn_unknown_keys(node, {"mode", "count", "ratio"}, "config.sample", warnings);
    if (node.contains("mode")) {
      const std::string mode = as_string(node.at("mode"), "config.sample.mode");
      if (mode == "uniform-random") {
        config.sample.mode = SamplePattern::Mode::kUniformRandom;
      } else if (mode == "scanline") {
        config.sample.mode = SamplePattern::Mode::kScanline;
      } else {
        bad_value("config.sample.mode", "expected 'uniform-random' or 'scanline'");
      }
    }
    if (node.contains("count")) {
      config.sample.count = node.at("count").get<long long>();
    }
    if (node.contains("ratio")) {
      config.sample.ratio = as_number(node.at("ratio"), "config.sample.ratio");
    }
    if (!config.sample.count && !config.sample.ratio) {
      bad_value("config.sample", "needs 'count' or 'ratio'");
    }
  } else {
    config.sample.ratio = 0.05;
  }

  if (document.contains("noise")) {
    const json& node = document.at("noise");
    warn_unknown_keys(node, {"outlier_frac", "magnitude"}, "config.noise", warnings);
    if (node.contains("outlier_frac")) {
      config.noise.outlier_frac = as_number(node.at("outlier_frac"), "config.noise.outlier_frac");
    }
    if (node.contains("magnitude")) {
      config.noise.magnitude = as_number(node.at("magnitude"), "config.noise.magnitude");
    }
    if (config.noise.outlier_frac < 0.0 || config.noise.outlier_frac > 1.0) {
      bad_value("config.noise.outlier_frac", "must lie in [0, 1]");
    }
    if (config.noise.magnitude < 0.0) bad_value("config.noise.magnitude", "must be >= 0");
  }

  if (document.contains("frontend")) {
    const json& node = document.at("frontend");
    warn_unknown_keys(node, {"mode", "perturb_amplitude", "k", "p", "w", "b", "depth_max"},
                      "config.frontend", warnings);
    if (node.contains("mode")) {
      const std::string mode = as_string(node.at("mode"), "config.frontend.mode");
      if (mode == "synthetic") {
        config.frontend.mode = FrontendParams::Mode::kSynthetic;
      } else if (mode == "classical") {
        config.frontend.mode = FrontendParams::Mode::kClassical;
      } else {
        bad_value("config.frontend.mode", "expected 'synthetic' or 'classical'");
      }
    }
    if (node.contains("perturb_amplitude")) {
      config.frontend.perturb_amplitude =
          as_number(node.at("perturb_amplitude"), "config.frontend.perturb_amplitude");
    }
    if (node.contains("k")) config.frontend.k = as_int(node.at("k"), "config.frontend.k");
    if (node.contains("p")) config.frontend.power = as_number(node.at("p"), "config.frontend.p");
    if (node.contains("w")) {
      config.frontend.normal_window = as_int(node.at("w"), "config.frontend.w");
    }
    if (node.contains("b")) config.frontend.b = as_number(node.at("b"), "config.frontend.b");
    if (node.contains("depth_max")) {
      config.frontend.depth_max = as_number(node.at("depth_max"), "config.frontend.depth_max");
    }
    if (config.frontend.k < 1) bad_value("config.frontend.k", "must be >= 1");
    if (config.frontend.normal_window < 1) bad_value("config.frontend.w", "must be >= 1");
    if (!(config.frontend.b > 0.0)) bad_value("config.frontend.b", "must be > 0");
    if (config.frontend.perturb_amplitude < 0.0) {
      bad_value("config.frontend.perturb_amplitude", "must be >= 0");
    }
    if (config.frontend.depth_max && !(*config.frontend.depth_max > 0.0)) {
      bad_value("config.frontend.depth_max", "must be > 0");
    }
  }

  if (document.contains("diffusion")) {
    const json& node = document.at("diffusion");
    warn_unknown_keys(node,
                      {"kernel", "iterations", "variant", "sigma", "temperature",
                       "use_replacement", "use_confidence", "eps_ray"},
                      "config.diffusion", warnings);
    DiffusionConfig& d = config.diffusion;
    if (node.contains("kernel")) d.kernel = as_int(node.at("kernel"), "config.diffusion.kernel");
    if (node.contains("iterations")) {
      d.iterations = as_int(node.at("iterations"), "config.diffusion.iterations");
    }
    if (node.contains("variant")) {
      try {
        d.variant = parse_variant(as_string(node.at("variant"), "config.diffusion.variant"));
      } catch (const std::exception& e) {
        bad_value("config.diffusion.variant", e.what());
      }
    }
    if (node.contains("sigma")) d.sigma = as_number(node.at("sigma"), "config.diffusion.sigma");
    if (node.contains("temperature")) {
      d.temperature = as_number(node.at("temperature"), "config.diffusion.temperature");
    }
    if (node.contains("use_replacement")) {
      d.use_replacement = as_bool(node.at("use_replacement"), "config.diffusion.use_replacement");
    }
    if (node.contains("use_confidence")) {
      d.use_confidence = as_bool(node.at("use_confidence"), "config.diffusion.use_confidence");
    }
    if (node.contains("eps_ray")) {
      d.eps_ray = as_number(node.at("eps_ray"), "config.diffusion.eps_ray");
    }
    try {
      d.validate();
    } catch (const std::exception& e) {
      bad_value("config.diffusion", e.what());
    }
  }

  if (document.contains("transforms")) {
    const json& node = document.at("transforms");
    warn_unknown_keys(node, {"f", "g"}, "config.transforms", warnings);
    if (node.contains("f")) config.transform_f = parse_matrix(node.at("f"), "config.transforms.f");
    if (node.contains("g")) config.transform_g = parse_matrix(node.at("g"), "config.transforms.g");
  }

  if (document.contains("sweep")) {
    const json& node = document.at("sweep");
    if (!node.is_array()) bad_value("config.sweep", "expected a list of declarations");
    for (std::size_t i = 0; i < node.size(); ++i) {
      const std::string sweep_path = "config.sweep[" + std::to_string(i) + "]";
      const json& decl = node[i];
      warn_unknown_keys(decl, {"path", "values"}, sweep_path, warnings);
      SweepDecl sweep;
      sweep.path = as_string(require(decl, "path", sweep_path), sweep_path + ".path");
      const json& values = require(decl, "values", sweep_path);
      if (!values.is_array() || values.empty()) {
        bad_value(sweep_path + ".values", "expected a non-empty list");
      }
      sweep.values.assign(values.begin(), values.end());
      config.sweeps.push_back(std::move(sweep));
    }
  }

  if (document.contains("output")) {
    config.output_dir = as_string(document.at("output"), "config.output");
  }
  if (document.contains("seed")) {
    if (!document.at("seed").is_number_unsigned() && !document.at("seed").is_number_integer()) {
      bad_value("config.seed", "expected an unsigned integer");
    }
    config.seed = document.at("seed").get<std::uint64_t>();
  }

  return config;
}

json load_config_document(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) {
    throw std::runtime_error("config: cannot open " + path.string());
  }
  try {
    return json::parse(file);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config: " + path.string() + ": " + e.what());
  }
}

void apply_sweep_value(json& document, const std::string& path, const json& value) {
  json* node = &document;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (!node->is_object() || !node->contains(key)) {
      throw std::invalid_argument("config: sweep path '" + path +
                                  "' does not address an existing key");
    }
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

std::vector<SweepPoint> expand_sweeps(const json& document) {
  json base = document;
  std::vector<SweepDecl> sweeps;
  if (base.contains("sweep")) {
    // Validated parse of just the sweep block, then drop it from the base.
    ExperimentConfig parsed = parse_experiment_config(base, nullptr);
    sweeps = parsed.sweeps;
    base.erase("sweep");
  }

  std::vector<SweepPoint> points{{base, {}}};
  for (const SweepDecl& sweep : sweeps) {
    std::vector<SweepPoint> expanded;
    for (const SweepPoint& point : points) {
      for (const json& value : sweep.values) {
        SweepPoint next = point;
        apply_sweep_value(next.document, sweep.path, value);
        next.assignments.push_back(sweep.path + "=" + value.dump());
        expanded.push_back(std::move(next));
      }
    }
    points = std::move(expanded);
  }
  return points;
}

}  // namespace podc
