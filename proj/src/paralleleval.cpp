#include "essns/paralleleval.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace essns {

void EvalRequest::validate() const {
  if (scenarios.empty()) throw std::invalid_argument("empty scenario batch");
  start_fire.validate();
  target_fire.validate();
  if (start_fire.grid != target_fire.grid)
    throw std::invalid_argument("start and target fire lines use different grids");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
}

int resolve_workers(int requested) {
  if (requested < 0) throw std::invalid_argument("worker count must be >= 0");
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

namespace {

// Runs fn(j) for j in [0,n) on `workers` threads. Indices are handed out in
// chunks from an atomic counter; each call writes only its own output slot,
// so results cannot depend on scheduling. The lowest failing index wins when
// several scenarios fail.
template <typename Fn>
void parallel_for_indexed(std::size_t n, int workers, Fn&& fn) {
  struct Failure {
    std::size_t index;
    std::string message;
  };
  std::mutex failure_mutex;
  std::optional<Failure> failure;

  auto guarded = [&](std::size_t j) {
    try {
      fn(j);
    } catch (const std::exception& e) {
      std::lock_guard lock(failure_mutex);
      if (!failure || j < failure->index) failure = Failure{j, e.what()};
    }
  };

  const int thread_count = std::min<std::size_t>(workers, n);
  if (thread_count <= 1) {
    for (std::size_t j = 0; j < n; ++j) guarded(j);
  } else {
    const std::size_t chunk = std::max<std::size_t>(1, n / (static_cast<std::size_t>(thread_count) * 4));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t begin = next.fetch_add(chunk);
        if (begin >= n) return;
        const std::size_t end = std::min(n, begin + chunk);
        for (std::size_t j = begin; j < end; ++j) guarded(j);
      }
    };
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (int t = 0; t < thread_count; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  if (failure) throw BatchError(failure->index, failure->message);
}

}  // namespace

std::vector<FireMap> simulate_batch(const SpreadModel& model, const std::vector<Scenario>& scenarios,
                                    const FireMap& start_fire, double horizon, int workers) {
  if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
  std::vector<FireMap> maps(scenarios.size());
  parallel_for_indexed(scenarios.size(), workers, [&](std::size_t j) {
    maps[j] = burned_at(simulate(start_fire.grid, model, scenarios[j], start_fire, horizon), horizon);
  });
  return maps;
}

std::vector<FitnessValue> evaluate_batch(const SpreadModel& model, const EvalRequest& request, int workers) {
  request.validate();
  if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
  std::vector<FitnessValue> result(request.scenarios.size());
  parallel_for_indexed(request.scenarios.size(), workers, [&](std::size_t j) {
    const FireMap sim = burned_at(
        simulate(request.start_fire.grid, model, request.scenarios[j], request.start_fire, request.horizon),
        request.horizon);
    result[j] = jaccard_fitness(request.target_fire, sim, request.start_fire);
  });
  return result;
}

}  // namespace essns
