// Acceptance suite: every release gate in one binary, one PASS/FAIL line per
// criterion. Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "essns/app.hpp"
#include "essns/config.hpp"
#include "essns/paralleleval.hpp"
#include "essns/pipeline.hpp"
#include "test_support.hpp"

using namespace essns;
using namespace essns::test;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool ok = false;
  std::string detail;
};

Outcome pass(std::string detail) { return {true, std::move(detail)}; }
Outcome fail(std::string detail) { return {false, std::move(detail)}; }

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

BatchFitnessFn sim_evaluator(const FireMap& start, const FireMap& target, double horizon,
                             int workers) {
  return [=](const std::vector<Scenario>& batch) {
    return evaluate_batch(SpreadModel::defaults(), EvalRequest{batch, start, target, horizon}, workers);
  };
}

Scenario hidden_scenario() {
  Scenario s;
  s.model = 7;
  s.wind_spd = 18;
  s.wind_dir = 225;
  s.m1 = 6;
  s.m10 = 8;
  s.m100 = 10;
  s.mherb = 45;
  s.slope = 12;
  s.aspect = 90;
  return s;
}

std::vector<FireMap> truth_from(const GridSpec& grid, const Scenario& s, double delta_t, int steps) {
  FireMap initial = FireMap::empty(grid);
  initial.set(grid.height / 2, grid.width / 2, true);
  const IgnitionTimeMap sim = simulate(grid, SpreadModel::defaults(), s, initial, steps * delta_t);
  std::vector<FireMap> truth;
  for (int i = 0; i < steps; ++i) truth.push_back(burned_at(sim, i * delta_t));
  return truth;
}

// Bisection on the step length until one step burns roughly the target
// fraction of the grid (the burned fraction is monotone in the horizon).
double bisect_delta_t(const GridSpec& grid, const Scenario& s, double target_fraction) {
  FireMap initial = FireMap::empty(grid);
  initial.set(grid.height / 2, grid.width / 2, true);
  const IgnitionTimeMap sim = simulate(grid, SpreadModel::defaults(), s, initial, 1e9);
  auto fraction_at = [&](double t) {
    return static_cast<double>(burned_at(sim, t).burned_count()) / grid.cell_count();
  };
  double lo = 0.0, hi = 1.0;
  while (fraction_at(hi) < target_fraction && hi < 1e6) hi *= 2.0;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (fraction_at(mid) < target_fraction ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------- criteria

// 1: Jaccard vs brute-force counting on 1,000 random 16x16 triples, exact.
Outcome criterion_jaccard_oracle() {
  const auto t0 = Clock::now();
  Rng rng = make_rng(1001);
  const GridSpec grid = make_grid(16, 16);
  for (int trial = 0; trial < 1000; ++trial) {
    const FireMap real = random_map(rng, grid, uniform_real(rng, 0.0, 0.6));
    const FireMap sim = random_map(rng, grid, uniform_real(rng, 0.0, 0.6));
    const FireMap pre = random_map(rng, grid, uniform_real(rng, 0.0, 0.4));
    const double got = jaccard_fitness(real, sim, pre).value;
    const double want = jaccard_oracle(real, sim, pre);
    if (got != want) return fail(fmt("triple %d: got %.17g, oracle %.17g", trial, got, want));
  }
  const double dt = seconds_since(t0);
  if (dt >= 5.0) return fail(fmt("took %.2f s (limit 5 s)", dt));
  return pass(fmt("1000 triples exact in %.2f s", dt));
}

// 2: every novelty score of a 20-generation run matches the O(n^2) oracle.
Outcome criterion_novelty_oracle() {
  const auto t0 = Clock::now();
  const GridSpec grid = make_grid(32, 32);
  const auto truth = truth_from(grid, hidden_scenario(), 20.0, 2);

  NsGaParams p;
  p.population_size = 16;
  p.offspring_count = 16;
  p.neighbors_k = 3;
  p.max_generations = 20;
  p.fitness_threshold = 1.1;
  p.archive_capacity = 32;
  p.bestset_capacity = 16;

  double max_diff = 0.0;
  long checked = 0;
  Rng rng = make_rng(1002);
  const NsGaResult res =
      run_ns_ga(p, sim_evaluator(truth[0], truth[1], 20.0, 2), rng,
                [&](const GenerationSnapshot& snap) {
                  const std::vector<Individual> reference(snap.novelty_set.begin(), snap.novelty_set.end());
                  for (const auto* group : {&snap.parents, &snap.offspring}) {
                    for (const Individual& ind : *group) {
                      max_diff = std::max(max_diff,
                                          std::abs(*ind.novelty - novelty_oracle(ind, reference, 3)));
                      ++checked;
                    }
                  }
                });
  const double dt = seconds_since(t0);
  if (res.generations != 20) return fail(fmt("ran %d generations, expected 20", res.generations));
  if (max_diff > 1e-12) return fail(fmt("max |difference| = %.3g > 1e-12", max_diff));
  if (dt >= 30.0) return fail(fmt("took %.2f s (limit 30 s)", dt));
  return pass(fmt("%ld scores within 1e-12 over 20 generations in %.2f s", checked, dt));
}

// 3: loop guard semantics, exact.
Outcome criterion_loop_semantics() {
  const GridSpec grid = make_grid(16, 16);
  const auto truth = truth_from(grid, hidden_scenario(), 15.0, 2);

  NsGaParams p;
  p.population_size = 8;
  p.offspring_count = 8;
  p.neighbors_k = 3;
  p.max_generations = 10;
  p.fitness_threshold = 1.1;
  Rng rng = make_rng(1003);
  const NsGaResult full = run_ns_ga(p, sim_evaluator(truth[0], truth[1], 15.0, 2), rng);
  if (full.generations != 10) return fail(fmt("threshold 1.1 ran %d generations, expected 10", full.generations));

  p.fitness_threshold = 0.9;
  const BatchFitnessFn clamped = [](const std::vector<Scenario>& batch) {
    return std::vector<FitnessValue>(batch.size(), FitnessValue(0.9));
  };
  Rng rng2 = make_rng(1004);
  const NsGaResult early = run_ns_ga(p, clamped, rng2);
  if (early.generations != 1) return fail(fmt("clamped run stopped after %d generations, expected 1", early.generations));
  return pass("threshold 1.1 runs maxGen; clamped 0.9 vs threshold 0.9 stops after generation 1");
}

// 4: best-set minimum fitness is nondecreasing, 50 seeds.
Outcome criterion_bestset_monotonic() {
  const GridSpec grid = make_grid(16, 16);
  const auto truth = truth_from(grid, hidden_scenario(), 15.0, 2);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    NsGaParams p;
    p.population_size = 16;
    p.offspring_count = 16;
    p.bestset_capacity = 16;
    p.archive_capacity = 32;
    p.neighbors_k = 3;
    p.max_generations = 20;
    p.fitness_threshold = 1.1;
    Rng rng = make_rng(seed);
    double prev_min = 0.0;
    bool monotone = true;
    int bad_generation = 0;
    run_ns_ga(p, sim_evaluator(truth[0], truth[1], 15.0, 2), rng,
              [&](const GenerationSnapshot& snap) {
                if (snap.generation > 1 && snap.best.min_fitness() < prev_min && monotone) {
                  monotone = false;
                  bad_generation = snap.generation;
                }
                prev_min = snap.best.min_fitness();
              });
    if (!monotone) return fail(fmt("seed %llu: min fitness dropped at generation %d",
                                   static_cast<unsigned long long>(seed), bad_generation));
  }
  return pass("min best-set fitness nondecreasing across 50 seeds x 20 generations");
}

RunConfig invariance_config(const std::string& out_dir, int workers) {
  RunConfig cfg;
  cfg.grid = GridSpec{64, 64, 10.0};
  cfg.ga.population_size = 32;
  cfg.ga.offspring_count = 32;
  cfg.ga.neighbors_k = 5;
  cfg.ga.max_generations = 10;
  cfg.ga.fitness_threshold = 1.1;
  cfg.ga.archive_capacity = 64;
  cfg.ga.bestset_capacity = 32;
  cfg.delta_t = 30.0;
  cfg.steps = 4;
  cfg.seed = 2025;
  cfg.workers = workers;
  SyntheticTruthSource syn;
  syn.reference = Scenario{5, 10, 270, 8, 10, 12, 60, 0, 0};
  syn.ignition_cells = {{32, 32}};
  cfg.truth = syn;
  cfg.output_dir = out_dir;
  return cfg;
}

// 5: byte-identical metrics.csv for 1, 2 and 8 workers.
Outcome criterion_worker_invariance() {
  const fs::path base = fs::temp_directory_path() / "essns_acceptance_workers";
  fs::remove_all(base);
  std::vector<std::string> metrics;
  std::string detail;
  for (int workers : {1, 2, 8}) {
    const auto t0 = Clock::now();
    const std::string out = (base / ("w" + std::to_string(workers))).string();
    run_experiment(invariance_config(out, workers));
    const double dt = seconds_since(t0);
    if (dt >= 120.0) return fail(fmt("workers=%d run took %.1f s (limit 120 s)", workers, dt));
    std::ifstream in(fs::path(out) / "metrics.csv");
    std::ostringstream text;
    text << in.rdbuf();
    metrics.push_back(text.str());
    detail += fmt("w%d %.1fs ", workers, dt);
  }
  fs::remove_all(base);
  if (metrics[0].empty()) return fail("empty metrics.csv");
  if (metrics[0] != metrics[1] || metrics[0] != metrics[2])
    return fail("metrics.csv differs across worker counts");
  return pass("metrics.csv byte-identical for workers {1,2,8} (" + detail + ")");
}

// 6: calibrated threshold is optimal over its candidate set at every step.
Outcome criterion_kign_optimality() {
  int steps_checked = 0;
  for (std::uint64_t seed : {11ULL, 22ULL, 33ULL}) {
    PipelineConfig cfg;
    cfg.grid = make_grid(24, 24);
    cfg.model = SpreadModel::defaults();
    cfg.ga.population_size = 12;
    cfg.ga.offspring_count = 12;
    cfg.ga.bestset_capacity = 12;
    cfg.ga.archive_capacity = 24;
    cfg.ga.neighbors_k = 3;
    cfg.ga.max_generations = 6;
    cfg.ga.fitness_threshold = 1.1;
    cfg.delta_t = 12.0;
    cfg.workers = 2;
    cfg.seed = seed;
    const auto truth = truth_from(cfg.grid, hidden_scenario(), cfg.delta_t, 5);
    const auto results = run_pipeline(cfg, truth);
    for (const auto& res : results) {
      const FireMap& real = truth[res.step_index];
      const FireMap& pre = truth[res.step_index - 1];
      std::vector<double> candidates;
      for (double p : res.matrix.prob)
        if (p > 0.0) candidates.push_back(p);
      candidates.push_back(1.0);
      for (double c : candidates) {
        const double fit = jaccard_oracle(real, threshold_matrix(res.matrix, KeyIgnitionValue(c)), pre);
        if (fit > res.calibration_fitness.value)
          return fail(fmt("seed %llu step %d: threshold %.12g beats the calibration (%.12g > %.12g)",
                          static_cast<unsigned long long>(seed), res.step_index, c, fit,
                          res.calibration_fitness.value));
      }
      ++steps_checked;
    }
  }
  return pass(fmt("no candidate beats the calibrated threshold over %d steps", steps_checked));
}

// 7: propagation matches the exhaustive relaxation oracle; quarter-turn
// symmetry holds without wind or slope.
Outcome criterion_simulator_invariants() {
  Rng rng = make_rng(1007);
  const GridSpec grid = make_grid(16, 16);
  const SpreadModel model = SpreadModel::defaults();
  for (int trial = 0; trial < 200; ++trial) {
    const Scenario s = random_scenario(rng);
    FireMap initial = FireMap::empty(grid);
    initial.set(uniform_int(rng, 0, 15), uniform_int(rng, 0, 15), true);
    const IgnitionTimeMap out = simulate(grid, model, s, initial, 1e9);
    const std::vector<double> oracle = relaxation_times_oracle(grid, model, s, initial);
    for (int i = 0; i < grid.cell_count(); ++i) {
      const double got = out.is_initial(i) ? 0.0 : out.time[i];
      if (std::abs(got - oracle[i]) > 1e-9)
        return fail(fmt("trial %d cell %d: time %.12g vs oracle %.12g", trial, i, got, oracle[i]));
    }
  }

  for (int trial = 0; trial < 20; ++trial) {
    Scenario s = random_scenario(rng);
    s.wind_spd = 0;
    s.slope = 0;
    const GridSpec odd = make_grid(17, 17);
    FireMap center = FireMap::empty(odd);
    center.set(8, 8, true);
    const IgnitionTimeMap out = simulate(odd, model, s, center, 1e9);
    for (int r = 0; r < 17; ++r)
      for (int c = 0; c < 17; ++c)
        if (out.time[odd.index(r, c)] != out.time[odd.index(c, 17 - 1 - r)])
          return fail(fmt("rotation trial %d: asymmetry at (%d,%d)", trial, r, c));
  }
  return pass("200 scenarios match the relaxation oracle; 20 calm runs rotation-invariant");
}

// 8: closed-loop recovery of a hidden scenario.
Outcome criterion_closed_loop() {
  const auto t0 = Clock::now();
  const GridSpec grid = GridSpec{64, 64, 10.0};
  const Scenario hidden = hidden_scenario();
  const double delta_t = bisect_delta_t(grid, hidden, 0.10);
  const auto truth = truth_from(grid, hidden, delta_t, 5);
  const double step1_fraction = static_cast<double>(truth[1].burned_count()) / grid.cell_count();
  if (step1_fraction < 0.01 || step1_fraction > 0.50)
    return fail(fmt("bisection left step 1 at %.1f%% burned", 100 * step1_fraction));

  const int steps = 4;
  std::vector<std::vector<double>> calib(steps);  // per step, across seeds
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    PipelineConfig cfg;
    cfg.grid = grid;
    cfg.model = SpreadModel::defaults();
    cfg.ga.population_size = 32;
    cfg.ga.offspring_count = 32;
    cfg.ga.neighbors_k = 5;
    cfg.ga.max_generations = 30;
    cfg.ga.fitness_threshold = 1.0;
    cfg.ga.archive_capacity = 64;
    cfg.ga.bestset_capacity = 32;
    cfg.delta_t = delta_t;
    cfg.workers = 0;
    cfg.seed = seed;
    const auto results = run_pipeline(cfg, truth);
    for (int i = 0; i < steps; ++i) calib[i].push_back(results[i].calibration_fitness.value);
  }

  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  std::string detail = fmt("dt=%.1f min; medians:", delta_t);
  bool ok = true;
  for (int i = 0; i < steps; ++i) {
    const double med = median(calib[i]);
    detail += fmt(" s%d=%.3f", i + 1, med);
    if (med < 0.7) ok = false;
    if (i == steps - 1 && med < 0.9) ok = false;
  }
  const double dt = seconds_since(t0);
  detail += fmt(" (%.0f s)", dt);
  if (!ok) return fail("calibration medians below target: " + detail);
  if (dt >= 600.0) return fail(fmt("took %.0f s (limit 600 s)", dt));
  return pass(detail);
}

// 9: parallel speedup on a 64-scenario batch.
Outcome criterion_speedup() {
  const GridSpec grid = GridSpec{64, 64, 10.0};
  const auto truth = truth_from(grid, hidden_scenario(), 60.0, 2);
  Rng rng = make_rng(1009);
  std::vector<Scenario> scenarios;
  for (int i = 0; i < 64; ++i) scenarios.push_back(random_scenario(rng));
  const EvalRequest req{scenarios, truth[0], truth[1], 60.0};

  const int cores = resolve_workers(0);
  if (cores < 2) return fail(fmt("only %d hardware thread(s); cannot demonstrate speedup", cores));

  auto best_of = [&](int workers) {
    double best = 1e300;
    for (int rep = 0; rep < 5; ++rep) {
      const auto t0 = Clock::now();
      evaluate_batch(SpreadModel::defaults(), req, workers);
      best = std::min(best, seconds_since(t0));
    }
    return best;
  };
  best_of(cores);  // warm-up
  const double single = best_of(1);
  const double parallel = best_of(cores);
  const double ratio = parallel / single;
  if (ratio > 0.6)
    return fail(fmt("%d workers: %.3f s vs %.3f s single (ratio %.2f > 0.6)", cores, parallel, single, ratio));
  return pass(fmt("%d workers: %.3f s vs %.3f s single (ratio %.2f)", cores, parallel, single, ratio));
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Jaccard oracle", criterion_jaccard_oracle},
      {2, "novelty oracle", criterion_novelty_oracle},
      {3, "search loop semantics", criterion_loop_semantics},
      {4, "best-set monotonicity", criterion_bestset_monotonic},
      {5, "worker-count invariance", criterion_worker_invariance},
      {6, "key-ignition-value optimality", criterion_kign_optimality},
      {7, "simulator invariants", criterion_simulator_invariants},
      {8, "closed-loop recovery", criterion_closed_loop},
      {9, "parallel speedup", criterion_speedup},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = fail(std::string("exception: ") + e.what());
    }
    std::printf("[%s] criterion %d (%s): %s\n", outcome.ok ? "PASS" : "FAIL", c.number, c.name,
                outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
