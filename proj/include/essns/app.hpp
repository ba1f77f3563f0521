#pragma once

#include <filesystem>
#include <vector>

#include "essns/config.hpp"
#include "essns/fitness.hpp"
#include "essns/landscape.hpp"
#include "essns/pipeline.hpp"

namespace essns {

// Closed-loop ground truth: simulate the reference scenario once over the
// whole horizon and snapshot the fire line at every step instant. Requires a
// synthetic truth source.
std::vector<FireMap> generate_truth(const RunConfig& cfg);

// Truth maps from whichever source the config names. File-based fire lines
// are accumulated so a cell, once burned, stays burned.
std::vector<FireMap> load_truth(const RunConfig& cfg);

// `generate-truth` subcommand: PGM per instant plus the ignition-time CSV.
void write_truth_maps(const RunConfig& cfg, const std::filesystem::path& out_dir);

// `run` subcommand: load or generate truth, run the pipeline, write
// manifest.json, metrics.csv, per-step artifacts and the final forecast.
// Returns a process exit status.
int run_experiment(const RunConfig& cfg);

// `evaluate` subcommand: score one scenario over the interval ending at
// truth instant `step`.
FitnessValue evaluate_scenario(const RunConfig& cfg, const Scenario& scenario, int step);

// Deterministic formatting used for every number in CSV output.
std::string format_double(double v);

inline constexpr const char* kMetricsHeader =
    "step,kign,calibration_fitness,prediction_fitness,generations,best_fitness,wall_time_s";

}  // namespace essns
