#include "essns/app.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace essns {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<FireMap> generate_truth(const RunConfig& cfg) {
  cfg.validate();
  const auto* syn = std::get_if<SyntheticTruthSource>(&cfg.truth);
  if (!syn) throw std::runtime_error("config: generate_truth needs a synthetic truth source");

  FireMap initial = FireMap::empty(cfg.grid);
  for (const auto& [r, c] : syn->ignition_cells) initial.set(r, c, true);

  const double horizon = cfg.steps * cfg.delta_t;
  const IgnitionTimeMap sim = simulate(cfg.grid, cfg.model, syn->reference, initial, horizon);

  std::vector<FireMap> truth;
  truth.reserve(cfg.steps);
  for (int i = 0; i < cfg.steps; ++i) truth.push_back(burned_at(sim, i * cfg.delta_t));
  return truth;
}

std::vector<FireMap> load_truth(const RunConfig& cfg) {
  cfg.validate();
  if (std::holds_alternative<SyntheticTruthSource>(cfg.truth)) return generate_truth(cfg);

  const auto& files = std::get<FileTruthSource>(cfg.truth);
  std::vector<FireMap> truth;
  truth.reserve(files.paths.size());
  for (const std::string& path : files.paths) {
    FireMap map = read_pgm_file(path, cfg.grid.cell_size);
    if (map.grid != cfg.grid)
      throw std::runtime_error("truth map " + path + " does not match the configured grid");
    // fire does not unburn: carry every earlier burned cell forward
    if (!truth.empty())
      for (std::size_t i = 0; i < map.burned.size(); ++i)
        if (truth.back().burned[i]) map.burned[i] = 1;
    truth.push_back(std::move(map));
  }
  return truth;
}

void write_truth_maps(const RunConfig& cfg, const fs::path& out_dir) {
  const std::vector<FireMap> truth = load_truth(cfg);
  fs::create_directories(out_dir);
  for (std::size_t i = 0; i < truth.size(); ++i)
    write_pgm_file(truth[i], out_dir / ("truth_" + std::to_string(i) + ".pgm"));

  if (const auto* syn = std::get_if<SyntheticTruthSource>(&cfg.truth)) {
    FireMap initial = FireMap::empty(cfg.grid);
    for (const auto& [r, c] : syn->ignition_cells) initial.set(r, c, true);
    const IgnitionTimeMap sim =
        simulate(cfg.grid, cfg.model, syn->reference, initial, cfg.steps * cfg.delta_t);
    write_times_csv_file(sim, out_dir / "truth_times.csv");
  }
}

namespace {

void write_matrix_csv(const ProbabilityMatrix& matrix, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  for (int r = 0; r < matrix.grid.height; ++r) {
    for (int c = 0; c < matrix.grid.width; ++c) {
      if (c) out << ',';
      out << format_double(matrix.prob[matrix.grid.index(r, c)]);
    }
    out << '\n';
  }
}

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

int run_experiment(const RunConfig& cfg) {
  cfg.validate();
  // Everything that can fail from bad input happens before the output
  // directory is created.
  const std::vector<FireMap> truth = load_truth(cfg);

  const fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir);
  open_for_write(out_dir / "manifest.json") << manifest_json(cfg);

  std::ofstream trace = open_for_write(out_dir / "ga_trace.csv");
  trace << "step," << trace_csv_header() << '\n';
  StepTraceFn trace_fn = [&](int step, const GenerationSnapshot& snap) {
    trace << step << ',' << trace_csv_row(snap) << '\n';
  };

  PipelineConfig pipeline_cfg{cfg.grid, cfg.model, cfg.ga, cfg.delta_t, cfg.workers, cfg.seed};
  const std::vector<PredictionStepResult> results = run_pipeline(pipeline_cfg, truth, trace_fn);

  std::ofstream metrics = open_for_write(out_dir / "metrics.csv");
  metrics << kMetricsHeader << '\n';
  std::ofstream timings = open_for_write(out_dir / "timings.csv");
  timings << "step,wall_time_s\n";

  for (const PredictionStepResult& res : results) {
    // The wall_time_s column stays empty: metrics.csv is byte-reproducible
    // for a given config, and elapsed time is not. Timings go to timings.csv.
    metrics << res.step_index << ',' << format_double(res.kign.value) << ','
            << format_double(res.calibration_fitness.value) << ','
            << (res.prediction_fitness ? format_double(res.prediction_fitness->value) : std::string()) << ','
            << res.generations_used << ',' << format_double(res.best_fitness) << ",\n";
    timings << res.step_index << ',' << format_double(res.wall_time_s) << '\n';

    const std::string tag = "step_" + std::to_string(res.step_index);
    write_matrix_csv(res.matrix, out_dir / (tag + "_matrix.csv"));
    if (res.predicted) write_pgm_file(*res.predicted, out_dir / (tag + "_predicted.pgm"));
  }
  // The operational product: the fire line forecast for the instant after the
  // last known one.
  write_pgm_file(results.back().next_prediction, out_dir / "forecast_next.pgm");
  return 0;
}

FitnessValue evaluate_scenario(const RunConfig& cfg, const Scenario& scenario, int step) {
  if (!validate_scenario(scenario)) throw std::runtime_error("scenario is outside the parameter ranges");
  const std::vector<FireMap> truth = load_truth(cfg);
  if (step < 1 || step >= static_cast<int>(truth.size()))
    throw std::runtime_error("step must lie in [1, steps-1]");
  const FireMap sim = burned_at(
      simulate(cfg.grid, cfg.model, scenario, truth[step - 1], cfg.delta_t), cfg.delta_t);
  return jaccard_fitness(truth[step], sim, truth[step - 1]);
}

}  // namespace essns
