#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "essns/firesim.hpp"
#include "essns/fitness.hpp"
#include "essns/landscape.hpp"
#include "essns/novelty.hpp"

namespace essns {

// Per-cell ignition probability aggregated over an ensemble of fire maps.
struct ProbabilityMatrix {
  GridSpec grid;
  std::vector<double> prob;

  bool operator==(const ProbabilityMatrix&) const = default;
};

struct KeyIgnitionValue {
  double value = 1.0;

  KeyIgnitionValue() = default;
  explicit KeyIgnitionValue(double v);  // throws unless v lies in (0,1]
};

// prob(cell) = fraction of maps in which the cell is burned.
ProbabilityMatrix aggregate_probability(const std::vector<FireMap>& maps);

// Cell burned iff prob(cell) >= kign. Antitone in kign.
FireMap threshold_matrix(const ProbabilityMatrix& matrix, KeyIgnitionValue kign);

struct KignSearchResult {
  KeyIgnitionValue kign;
  FitnessValue fitness;
};

// Exhaustive threshold calibration. The fitness of a thresholded matrix is
// piecewise-constant in the threshold, so only the distinct positive cell
// probabilities (plus 1.0) can change the outcome; the best of those is a
// global optimum. Fitness ties resolve to the largest threshold, the most
// conservative prediction.
KignSearchResult search_kign(const ProbabilityMatrix& matrix, const FireMap& real,
                             const FireMap& preburned);

struct PipelineConfig {
  GridSpec grid;
  SpreadModel model;
  NsGaParams ga;
  double delta_t = 0.0;  // minutes per prediction step
  int workers = 1;
  std::uint64_t seed = 0;
};

// Outcome of one prediction step. `predicted` is the fire line this step was
// given in advance for its own instant; the first step never has one. The
// `next_prediction` is this step's forward forecast for the following
// instant: the best-set scenarios re-simulated from the current fire line and
// thresholded with the freshly calibrated key ignition value.
struct PredictionStepResult {
  int step_index = 0;
  KeyIgnitionValue kign;
  std::optional<FireMap> predicted;
  std::optional<FitnessValue> prediction_fitness;
  FitnessValue calibration_fitness;
  int generations_used = 0;
  double wall_time_s = 0.0;
  double best_fitness = 0.0;          // highest individual fitness found by the search
  ProbabilityMatrix matrix;           // calibration-interval probability matrix
  std::vector<Scenario> best_scenarios;  // the calibrated ensemble, fitness descending
  FireMap next_prediction;
};

// Observes every GA generation of a step (for the trace log).
using StepTraceFn = std::function<void(int step, const GenerationSnapshot&)>;

// One prediction step: search scenarios over the known interval
// [t_{step-1}, t_step], aggregate the best-found maps into a probability
// matrix, calibrate the key ignition value against the real fire line, score
// the prediction this step had been given, and forecast the next instant.
PredictionStepResult run_step(const PipelineConfig& cfg, int step, const FireMap& rfl_prev,
                              const FireMap& rfl_now, const std::optional<FireMap>& pending_prediction,
                              const StepTraceFn& trace = {});

// Runs steps 1..n-1 over n real fire lines, threading each step's forecast
// into the next. Fire lines must be nested (burned cells never unburn).
std::vector<PredictionStepResult> run_pipeline(const PipelineConfig& cfg,
                                               const std::vector<FireMap>& truth,
                                               const StepTraceFn& trace = {});

}  // namespace essns
