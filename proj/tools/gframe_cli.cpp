// Command-line front end: run experiment configs, generate fixtures.

#include <iostream>

#include <CLI11.hpp>

#include "gframe/errors.hpp"
#include "gframe/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Verify frame inequalities, perturbation bounds and fiber decompositions"};
  app.set_version_flag("--version", gframe::kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  gframe::RunOptions options;
  double tol = -1.0;
  app.add_option("--tol", tol, "Override the config tolerance")->check(CLI::PositiveNumber);
  app.add_option("--jobs", options.jobs, "OpenMP threads (0 keeps the default)")->check(CLI::NonNegativeNumber);
  app.add_flag("--quiet", options.quiet, "Suppress the summary table on stdout");

  auto* run = app.add_subcommand("run", "Run an experiment config");
  std::string config_path;
  run->add_option("config", config_path, "Path to a JSON config")->required();

  auto* generate = app.add_subcommand("generate", "Write a deterministic fixture directory");
  std::string kind_name;
  std::uint64_t seed = 0;
  std::size_t dim = 3;
  std::string out_dir;
  generate->add_option("kind", kind_name, "FrameAnalysis | IdentitySuite | PerturbationStudy | FiberizationDemo")
      ->required();
  generate->add_option("--seed", seed, "Master seed");
  generate->add_option("--dim", dim, "Hilbert space dimension")->check(CLI::Range(1, 256));
  generate->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (tol > 0.0) options.tol = tol;

  if (*run) return gframe::run_config_file(config_path, options, std::cout, std::cerr);

  const auto kind = gframe::parse_experiment_kind(kind_name);
  if (!kind) {
    std::cerr << "error: unknown experiment kind '" << kind_name << "'\n";
    return 2;
  }
  try {
    for (const auto& path : gframe::generate_fixtures(*kind, seed, dim, out_dir))
      if (!options.quiet) std::cout << path.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
