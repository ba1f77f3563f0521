#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "essns/app.hpp"
#include "essns/config.hpp"

int main(int argc, char** argv) try {
  CLI::App app{"essns - wildfire propagation prediction with a novelty-search scenario ensemble"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::string scenario_path;
  std::uint64_t seed = 0;
  int workers = -1;
  int step = 1;
  bool seed_set = false;

  CLI::App* run = app.add_subcommand("run", "Execute the full prediction pipeline");
  run->add_option("--config", config_path, "Run configuration (JSON)")->required();
  run->add_option("--seed", seed, "Override the configured RNG seed")->each([&](const std::string&) { seed_set = true; });
  run->add_option("--workers", workers, "Override the worker count (0 = all hardware threads)");
  run->add_option("--out", out_override, "Override the output directory");

  CLI::App* gen = app.add_subcommand("generate-truth", "Write the ground-truth fire lines and exit");
  gen->add_option("--config", config_path, "Run configuration (JSON)")->required();
  gen->add_option("--out", out_override, "Output directory")->required();

  CLI::App* eval = app.add_subcommand("evaluate", "Score one scenario against the configured truth");
  eval->add_option("--config", config_path, "Run configuration (JSON)")->required();
  eval->add_option("--scenario", scenario_path, "Scenario to score (JSON)")->required();
  eval->add_option("--step", step, "Truth instant the simulated interval ends at (default 1)");

  CLI11_PARSE(app, argc, argv);

  essns::RunConfig cfg = essns::load_config(config_path);
  if (seed_set) cfg.seed = seed;
  if (workers >= 0) cfg.workers = workers;
  if (!out_override.empty()) cfg.output_dir = out_override;

  if (run->parsed()) return essns::run_experiment(cfg);
  if (gen->parsed()) {
    essns::write_truth_maps(cfg, out_override);
    return 0;
  }
  const essns::Scenario scenario = essns::load_scenario(scenario_path);
  std::cout << essns::format_double(essns::evaluate_scenario(cfg, scenario, step).value) << '\n';
  return 0;
} catch (const std::exception& e) {
  std::cerr << "essns: " << e.what() << '\n';
  return 1;
}
