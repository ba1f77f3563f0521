#include "essns/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "essns/paralleleval.hpp"
#include "essns/rng.hpp"

namespace essns {

KeyIgnitionValue::KeyIgnitionValue(double v) : value(v) {
  if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("key ignition value must lie in (0,1]");
}

ProbabilityMatrix aggregate_probability(const std::vector<FireMap>& maps) {
  if (maps.empty()) throw std::invalid_argument("cannot aggregate an empty map list");
  const GridSpec grid = maps.front().grid;
  for (const FireMap& m : maps) {
    m.validate();
    if (m.grid != grid) throw std::invalid_argument("aggregated maps use different grids");
  }
  ProbabilityMatrix out{grid, std::vector<double>(grid.cell_count(), 0.0)};
  for (const FireMap& m : maps)
    for (int i = 0; i < grid.cell_count(); ++i)
      if (m.burned[i]) out.prob[i] += 1.0;
  for (double& p : out.prob) p /= static_cast<double>(maps.size());
  return out;
}

FireMap threshold_matrix(const ProbabilityMatrix& matrix, KeyIgnitionValue kign) {
  FireMap out = FireMap::empty(matrix.grid);
  for (int i = 0; i < matrix.grid.cell_count(); ++i)
    out.burned[i] = matrix.prob[i] >= kign.value ? 1 : 0;
  return out;
}

KignSearchResult search_kign(const ProbabilityMatrix& matrix, const FireMap& real,
                             const FireMap& preburned) {
  if (matrix.grid != real.grid || matrix.grid != preburned.grid)
    throw std::invalid_argument("search_kign requires one grid");

  // Distinct observed probability levels, descending, with 1.0 always in play.
  std::vector<double> candidates;
  candidates.reserve(matrix.prob.size() + 1);
  for (double p : matrix.prob)
    if (p > 0.0) candidates.push_back(p);
  candidates.push_back(1.0);
  std::sort(candidates.begin(), candidates.end(), std::greater<>());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Descending scan with a strict improvement test: ties keep the larger
  // (more conservative) threshold.
  KignSearchResult best{KeyIgnitionValue(candidates.front()), FitnessValue(0.0)};
  bool first = true;
  for (double c : candidates) {
    const KeyIgnitionValue kign(c);
    const FitnessValue fit = jaccard_fitness(real, threshold_matrix(matrix, kign), preburned);
    if (first || fit.value > best.fitness.value) {
      best = KignSearchResult{kign, fit};
      first = false;
    }
  }
  return best;
}

PredictionStepResult run_step(const PipelineConfig& cfg, int step, const FireMap& rfl_prev,
                              const FireMap& rfl_now, const std::optional<FireMap>& pending_prediction,
                              const StepTraceFn& trace) {
  if (step < 1) throw std::invalid_argument("prediction steps start at 1");
  cfg.grid.validate();
  cfg.model.validate();
  if (!(cfg.delta_t > 0.0)) throw std::invalid_argument("delta_t must be positive");
  rfl_prev.validate();
  rfl_now.validate();
  if (rfl_prev.grid != cfg.grid || rfl_now.grid != cfg.grid)
    throw std::invalid_argument("fire lines do not match the configured grid");
  if (rfl_prev.burned_count() == 0) throw std::invalid_argument("previous fire line is empty");

  const auto t0 = std::chrono::steady_clock::now();
  const int workers = resolve_workers(cfg.workers);

  // Optimization stage: search scenarios by how well they reproduce the known
  // interval. All randomness stays in this thread; the workers only simulate.
  BatchFitnessFn evaluator = [&](const std::vector<Scenario>& scenarios) {
    return evaluate_batch(cfg.model, EvalRequest{scenarios, rfl_prev, rfl_now, cfg.delta_t}, workers);
  };
  Rng rng = make_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(step)));
  GenerationObserver observer;
  if (trace) observer = [&](const GenerationSnapshot& snap) { trace(step, snap); };
  NsGaResult ga = run_ns_ga(cfg.ga, evaluator, rng, observer);
  if (ga.best.members.empty())
    throw std::runtime_error("the search returned no candidate scenarios (fitness_threshold 0?)");

  std::vector<Scenario> best_scenarios;
  best_scenarios.reserve(ga.best.members.size());
  for (const Individual& ind : ga.best.members) best_scenarios.push_back(ind.scenario);

  // Statistical stage over the calibration interval, then threshold
  // calibration against the current real fire line.
  const std::vector<FireMap> calib_maps =
      simulate_batch(cfg.model, best_scenarios, rfl_prev, cfg.delta_t, workers);
  ProbabilityMatrix matrix = aggregate_probability(calib_maps);
  const KignSearchResult calib = search_kign(matrix, rfl_now, rfl_prev);

  // Prediction stage, forward half: re-simulate the best set from the fire
  // line known now and threshold with the value just calibrated. This is the
  // fire-line forecast for the next instant.
  const std::vector<FireMap> forward_maps =
      simulate_batch(cfg.model, best_scenarios, rfl_now, cfg.delta_t, workers);
  FireMap next_prediction = threshold_matrix(aggregate_probability(forward_maps), calib.kign);

  PredictionStepResult result;
  result.step_index = step;
  result.kign = calib.kign;
  result.calibration_fitness = calib.fitness;
  result.generations_used = ga.generations;
  result.best_fitness = ga.best.max_fitness();
  result.matrix = std::move(matrix);
  result.best_scenarios = std::move(best_scenarios);
  result.next_prediction = std::move(next_prediction);

  // Prediction stage, scoring half: the forecast the previous step issued for
  // this instant, measured against what actually burned. Step 1 has none.
  if (pending_prediction) {
    if (pending_prediction->grid != cfg.grid)
      throw std::invalid_argument("pending prediction grid mismatch");
    result.predicted = *pending_prediction;
    result.prediction_fitness = jaccard_fitness(rfl_now, *pending_prediction, rfl_prev);
  }

  result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::vector<PredictionStepResult> run_pipeline(const PipelineConfig& cfg,
                                               const std::vector<FireMap>& truth,
                                               const StepTraceFn& trace) {
  if (truth.size() < 3)
    throw std::invalid_argument("need at least 3 real fire lines for one genuine prediction");
  for (std::size_t i = 0; i + 1 < truth.size(); ++i)
    if (!truth[i].subset_of(truth[i + 1]))
      throw std::invalid_argument("real fire lines must be nested: burned cells cannot unburn");

  std::vector<PredictionStepResult> results;
  results.reserve(truth.size() - 1);
  std::optional<FireMap> pending;
  for (std::size_t i = 1; i < truth.size(); ++i) {
    PredictionStepResult res =
        run_step(cfg, static_cast<int>(i), truth[i - 1], truth[i], pending, trace);
    pending = res.next_prediction;
    results.push_back(std::move(res));
  }
  return results;
}

}  // namespace essns
