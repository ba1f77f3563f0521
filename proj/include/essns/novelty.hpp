#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "essns/fitness.hpp"
#include "essns/landscape.hpp"
#include "essns/rng.hpp"

namespace essns {

// One member of the search: a scenario plus its cached evaluations. Ids are
// unique and monotone within a run; every tie anywhere in the search breaks
// toward the lower id, which keeps runs reproducible across platforms.
struct Individual {
  Scenario scenario;
  std::optional<FitnessValue> fitness;
  std::optional<double> novelty;
  int birth_generation = 0;
  std::uint64_t id = 0;
};

class IdAllocator {
 public:
  std::uint64_t allocate() { return next_++; }

 private:
  std::uint64_t next_ = 0;
};

// Behavior distance between two evaluated individuals: the absolute fitness
// difference. (The signed difference a nearest-neighbor rule cannot use.)
double distance(const Individual& a, const Individual& b);

// Mean distance from x to its k nearest members of the reference set,
// x itself excluded by id. Distance ties sort toward the lower id; fewer
// than k candidates average over all of them.
double evaluate_novelty(const Individual& x, std::span<const Individual> novelty_set, int k);

// Selection and reproduction for one generation: roulette-wheel selection
// weighted by novelty (uniform while no novelty signal exists), per-parameter
// uniform crossover with probability crossover_rate, then per-parameter
// mutation to a fresh uniform draw with probability mutation_rate. Returns
// exactly m children with fresh ids and no evaluations.
std::vector<Individual> generate_offspring(const std::vector<Individual>& population, int m,
                                           double mutation_rate, double crossover_rate,
                                           int birth_generation, Rng& rng, IdAllocator& ids);

// Bounded memory of the most novel individuals seen so far. Members keep the
// novelty they had when inserted; they are never re-scored.
struct Archive {
  int capacity = 1;
  std::vector<Individual> members;  // novelty descending, ties by lower id
};

// Bounded collection of the highest-fitness individuals seen so far.
struct BestSet {
  int capacity = 1;
  std::vector<Individual> members;  // fitness descending, ties by lower id

  double max_fitness() const { return members.empty() ? 0.0 : members.front().fitness->value; }
  double min_fitness() const { return members.empty() ? 0.0 : members.back().fitness->value; }
};

Archive update_archive(const Archive& archive, std::span<const Individual> offspring);
std::vector<Individual> replace_by_novelty(const std::vector<Individual>& population,
                                           const std::vector<Individual>& offspring, int n);
BestSet update_best(const BestSet& best, std::span<const Individual> offspring);

struct NsGaParams {
  int population_size = 32;
  int offspring_count = 32;
  double mutation_rate = 0.2;
  double crossover_rate = 0.9;
  int neighbors_k = 5;
  int max_generations = 30;
  // Values above 1 disable the fitness stop and run all generations.
  double fitness_threshold = 1.0;
  int archive_capacity = 64;
  int bestset_capacity = 32;

  void validate() const;
  bool operator==(const NsGaParams&) const = default;
};

// Evaluates a batch of scenarios to fitness values, in order. Must behave as
// a pure function; the search caches its results.
using BatchFitnessFn = std::function<std::vector<FitnessValue>(const std::vector<Scenario>&)>;

// Everything a finished generation produced, exposed for tracing and tests.
// References stay valid only during the observer call.
struct GenerationSnapshot {
  int generation;  // 1-based
  const std::vector<Individual>& parents;      // population that bred this generation, re-scored
  const std::vector<Individual>& offspring;    // this generation's children, scored
  const std::vector<Individual>& novelty_set;  // reference set the novelty scores used
  const Archive& archive;                      // after the update
  const BestSet& best;                         // after the update
  double max_fitness;
};

using GenerationObserver = std::function<void(const GenerationSnapshot&)>;

struct NsGaResult {
  BestSet best;
  int generations = 0;
};

// The novelty-search GA. Each generation: breed m offspring, evaluate fitness
// of anyone not yet evaluated, score novelty of population and offspring
// against population + offspring + archive, refresh archive and best set, and
// replace the population with the most novel individuals. Stops at
// max_generations or as soon as the best fitness reaches fitness_threshold.
NsGaResult run_ns_ga(const NsGaParams& params, const BatchFitnessFn& evaluator, Rng& rng,
                     const GenerationObserver& observer = {});

// Trace CSV helpers (one row per generation).
std::string trace_csv_header();
std::string trace_csv_row(const GenerationSnapshot& snap);

}  // namespace essns
