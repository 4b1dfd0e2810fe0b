#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "podc/bench.hpp"
#include "podc/config.hpp"

namespace {

struct CliArgs {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool has_seed = false;
  bool quiet = false;
  bool no_images = false;
  std::string sweep_param;
  std::string sweep_values;
};

void add_common_options(CLI::App* cmd, CliArgs& args) {
  cmd->add_option("--config", args.config, "experiment config (JSON)")->required();
  cmd->add_option("--out", args.out, "output directory (overrides the config)");
  cmd->add_option("--seed", args.seed, "RNG seed override")->each([&](const std::string&) {
    args.has_seed = true;
  });
  cmd->add_flag("--quiet", args.quiet, "suppress per-row output");
  cmd->add_flag("--no-images", args.no_images, "skip depth/confidence image dumps");
}

podc::BenchOptions to_options(const CliArgs& args) {
  podc::BenchOptions options;
  options.config_path = args.config;
  if (!args.out.empty()) options.out_dir = args.out;
  if (args.has_seed) options.seed_override = args.seed;
  options.quiet = args.quiet;
  options.write_images = !args.no_images;
  return options;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"podc: plane-origin distance diffusion for sparse-to-dense depth completion"};
  app.require_subcommand(1);

  CliArgs args;
  CLI::App* run = app.add_subcommand("run", "run the config (expanding declared sweeps)");
  add_common_options(run, args);

  CLI::App* ablate = app.add_subcommand("ablate", "run the ablation suite on the config");
  add_common_options(ablate, args);

  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  add_common_options(sweep, args);
  sweep->add_option("--param", args.sweep_param, "config key path to sweep (with --values)");
  sweep->add_option("--values", args.sweep_values, "JSON list of sweep values (with --param)");

  CLI11_PARSE(app, argc, argv);

  if (ablate->parsed()) {
    return podc::run_ablation_suite(to_options(args));
  }

  if (sweep->parsed()) {
    if (args.sweep_param.empty() != args.sweep_values.empty()) {
      std::cerr << "error: --param and --values must be given together\n";
      return 2;
    }
    if (!args.sweep_param.empty()) {
      // Inject the command-line sweep into a temporary copy of the config.
      try {
        nlohmann::json document = podc::load_config_document(args.config);
        nlohmann::json values = nlohmann::json::parse(args.sweep_values);
        if (!values.is_array() || values.empty()) {
          std::cerr << "error: --values must be a non-empty JSON list\n";
          return 2;
        }
        document["sweep"].push_back({{"path", args.sweep_param}, {"values", values}});
        const auto patched = std::filesystem::temp_directory_path() /
                             ("podc-sweep-" + std::to_string(::getpid()) + ".json");
        std::ofstream(patched) << document.dump(2);
        CliArgs patched_args = args;
        patched_args.config = patched.string();
        const int status = podc::run_experiment(to_options(patched_args));
        std::filesystem::remove(patched);
        return status;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
    }
    return podc::run_experiment(to_options(args));
  }

  return podc::run_experiment(to_options(args));
}
