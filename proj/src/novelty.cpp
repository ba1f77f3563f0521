#include "essns/novelty.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace essns {

namespace {

double fitness_of(const Individual& ind) {
  if (!ind.fitness) throw std::invalid_argument("individual has no fitness value");
  return ind.fitness->value;
}

double novelty_of(const Individual& ind) {
  if (!ind.novelty) throw std::invalid_argument("individual has no novelty score");
  return *ind.novelty;
}

bool more_novel(const Individual& a, const Individual& b) {
  const double na = novelty_of(a), nb = novelty_of(b);
  if (na != nb) return na > nb;
  return a.id < b.id;
}

bool higher_fitness(const Individual& a, const Individual& b) {
  const double fa = fitness_of(a), fb = fitness_of(b);
  if (fa != fb) return fa > fb;
  return a.id < b.id;
}

void mutate(Scenario& s, double mutation_rate, Rng& rng) {
  for (int p = 0; p < kScenarioParamCount; ++p)
    if (uniform01(rng) < mutation_rate) set_scenario_param(s, p, random_param(rng, p));
}

}  // namespace

double distance(const Individual& a, const Individual& b) {
  return std::abs(fitness_of(a) - fitness_of(b));
}

double evaluate_novelty(const Individual& x, std::span<const Individual> novelty_set, int k) {
  if (k < 1) throw std::invalid_argument("neighbor count k must be >= 1");
  std::vector<std::pair<double, std::uint64_t>> dists;
  dists.reserve(novelty_set.size());
  for (const Individual& other : novelty_set) {
    if (other.id == x.id) continue;
    dists.emplace_back(distance(x, other), other.id);
  }
  if (dists.empty()) throw std::invalid_argument("novelty reference set is empty");
  std::sort(dists.begin(), dists.end());
  const std::size_t take = std::min<std::size_t>(k, dists.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) sum += dists[i].first;
  return sum / static_cast<double>(take);
}

std::vector<Individual> generate_offspring(const std::vector<Individual>& population, int m,
                                           double mutation_rate, double crossover_rate,
                                           int birth_generation, Rng& rng, IdAllocator& ids) {
  if (population.empty()) throw std::invalid_argument("cannot breed from an empty population");
  if (m < 0) throw std::invalid_argument("offspring count must be nonnegative");

  // Roulette weights come from the previous generation's novelty scores; with
  // no signal yet (generation 0, or a fully converged population) selection
  // degenerates to uniform.
  std::vector<double> weights(population.size());
  double total = 0.0;
  for (std::size_t i = 0; i < population.size(); ++i) {
    weights[i] = population[i].novelty.value_or(0.0);
    total += weights[i];
  }
  auto select = [&]() -> const Individual& {
    if (total <= 0.0) return population[uniform_int(rng, 0, static_cast<int>(population.size()) - 1)];
    const double spin = uniform01(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < population.size(); ++i) {
      acc += weights[i];
      if (spin < acc) return population[i];
    }
    return population.back();
  };

  std::vector<Individual> out;
  out.reserve(m);
  while (static_cast<int>(out.size()) < m) {
    const Individual& pa = select();
    const Individual& pb = select();
    Scenario ca = pa.scenario;
    Scenario cb = pb.scenario;
    if (uniform01(rng) < crossover_rate) {
      for (int p = 0; p < kScenarioParamCount; ++p) {
        if (uniform01(rng) < 0.5) {
          const double va = scenario_param(ca, p);
          set_scenario_param(ca, p, scenario_param(cb, p));
          set_scenario_param(cb, p, va);
        }
      }
    }
    mutate(ca, mutation_rate, rng);
    out.push_back(Individual{ca, std::nullopt, std::nullopt, birth_generation, ids.allocate()});
    if (static_cast<int>(out.size()) < m) {
      mutate(cb, mutation_rate, rng);
      out.push_back(Individual{cb, std::nullopt, std::nullopt, birth_generation, ids.allocate()});
    }
  }
  return out;
}

Archive update_archive(const Archive& archive, std::span<const Individual> offspring) {
  if (archive.capacity < 1) throw std::invalid_argument("archive capacity must be >= 1");
  for (const Individual& ind : offspring) novelty_of(ind);
  Archive out{archive.capacity, archive.members};
  out.members.insert(out.members.end(), offspring.begin(), offspring.end());
  std::sort(out.members.begin(), out.members.end(), more_novel);
  if (static_cast<int>(out.members.size()) > out.capacity) out.members.resize(out.capacity);
  return out;
}

std::vector<Individual> replace_by_novelty(const std::vector<Individual>& population,
                                           const std::vector<Individual>& offspring, int n) {
  std::vector<Individual> pool = population;
  pool.insert(pool.end(), offspring.begin(), offspring.end());
  if (static_cast<int>(pool.size()) < n)
    throw std::invalid_argument("fewer candidates than the population size");
  for (const Individual& ind : pool) novelty_of(ind);
  std::sort(pool.begin(), pool.end(), more_novel);
  pool.resize(n);
  return pool;
}

BestSet update_best(const BestSet& best, std::span<const Individual> offspring) {
  if (best.capacity < 1) throw std::invalid_argument("best-set capacity must be >= 1");
  for (const Individual& ind : offspring) fitness_of(ind);
  BestSet out{best.capacity, best.members};
  out.members.insert(out.members.end(), offspring.begin(), offspring.end());
  std::sort(out.members.begin(), out.members.end(), higher_fitness);
  if (static_cast<int>(out.members.size()) > out.capacity) out.members.resize(out.capacity);
  return out;
}

void NsGaParams::validate() const {
  if (population_size < 1) throw std::invalid_argument("population_size must be >= 1");
  if (offspring_count < 1) throw std::invalid_argument("offspring_count must be >= 1");
  if (mutation_rate < 0.0 || mutation_rate > 1.0) throw std::invalid_argument("mutation_rate must lie in [0,1]");
  if (crossover_rate < 0.0 || crossover_rate > 1.0) throw std::invalid_argument("crossover_rate must lie in [0,1]");
  if (neighbors_k < 1) throw std::invalid_argument("neighbors_k must be >= 1");
  if (max_generations < 1) throw std::invalid_argument("max_generations must be >= 1");
  if (fitness_threshold < 0.0) throw std::invalid_argument("fitness_threshold must be >= 0");
  if (archive_capacity < 1) throw std::invalid_argument("archive_capacity must be >= 1");
  if (bestset_capacity < 1) throw std::invalid_argument("bestset_capacity must be >= 1");
}

namespace {

// population + offspring + archive with duplicate ids removed (a survivor can
// sit in both the population and the archive).
std::vector<Individual> build_novelty_set(const std::vector<Individual>& population,
                                          const std::vector<Individual>& offspring,
                                          const std::vector<Individual>& archive) {
  std::vector<Individual> set;
  set.reserve(population.size() + offspring.size() + archive.size());
  std::unordered_set<std::uint64_t> seen;
  for (const auto* group : {&population, &offspring, &archive})
    for (const Individual& ind : *group)
      if (seen.insert(ind.id).second) set.push_back(ind);
  return set;
}

}  // namespace

NsGaResult run_ns_ga(const NsGaParams& params, const BatchFitnessFn& evaluator, Rng& rng,
                     const GenerationObserver& observer) {
  params.validate();
  if (!evaluator) throw std::invalid_argument("missing fitness evaluator");

  IdAllocator ids;
  std::vector<Individual> population;
  population.reserve(params.population_size);
  for (int i = 0; i < params.population_size; ++i)
    population.push_back(Individual{random_scenario(rng), std::nullopt, std::nullopt, 0, ids.allocate()});

  Archive archive{params.archive_capacity, {}};
  BestSet best{params.bestset_capacity, {}};
  int generations = 0;
  double max_fitness = 0.0;

  while (generations < params.max_generations && max_fitness < params.fitness_threshold) {
    auto offspring = generate_offspring(population, params.offspring_count, params.mutation_rate,
                                        params.crossover_rate, generations + 1, rng, ids);

    // The simulator is deterministic, so fitness is evaluated once per
    // individual; survivors keep their cached value.
    std::vector<Scenario> batch;
    std::vector<Individual*> slots;
    for (auto* group : {&population, &offspring}) {
      for (Individual& ind : *group) {
        if (!ind.fitness) {
          batch.push_back(ind.scenario);
          slots.push_back(&ind);
        }
      }
    }
    if (!batch.empty()) {
      const std::vector<FitnessValue> values = evaluator(batch);
      if (values.size() != batch.size())
        throw std::runtime_error("evaluator returned a batch of the wrong size");
      for (std::size_t i = 0; i < slots.size(); ++i) slots[i]->fitness = values[i];
    }

    // Novelty is recomputed every generation: the reference set changes.
    const std::vector<Individual> novelty_set = build_novelty_set(population, offspring, archive.members);
    for (auto* group : {&population, &offspring})
      for (Individual& ind : *group) ind.novelty = evaluate_novelty(ind, novelty_set, params.neighbors_k);

    archive = update_archive(archive, offspring);
    auto next_population = replace_by_novelty(population, offspring, params.population_size);
    best = update_best(best, offspring);
    max_fitness = best.max_fitness();
    ++generations;

    if (observer)
      observer(GenerationSnapshot{generations, population, offspring, novelty_set, archive, best, max_fitness});
    population = std::move(next_population);
  }

  return NsGaResult{std::move(best), generations};
}

std::string trace_csv_header() {
  return "generation,max_fitness,mean_novelty,archive_size,best_min_fitness,best_max_fitness";
}

std::string trace_csv_row(const GenerationSnapshot& snap) {
  double novelty_sum = 0.0;
  std::size_t count = 0;
  for (const auto* group : {&snap.parents, &snap.offspring}) {
    for (const Individual& ind : *group) {
      novelty_sum += ind.novelty.value_or(0.0);
      ++count;
    }
  }
  const double mean_novelty = count ? novelty_sum / static_cast<double>(count) : 0.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%zu,%.12g,%.12g", snap.generation, snap.max_fitness,
                mean_novelty, snap.archive.members.size(), snap.best.min_fitness(), snap.best.max_fitness());
  return buf;
}

}  // namespace essns
