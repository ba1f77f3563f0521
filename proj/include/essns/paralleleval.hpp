#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "essns/firesim.hpp"
#include "essns/fitness.hpp"
#include "essns/landscape.hpp"

namespace essns {

// One batch of scenario evaluations: simulate each scenario from start_fire
// over `horizon` minutes and score the result against target_fire.
struct EvalRequest {
  std::vector<Scenario> scenarios;
  FireMap start_fire;
  FireMap target_fire;
  double horizon = 0.0;

  void validate() const;
};

// Raised when any scenario in a batch fails; carries the lowest failing index
// so the report does not depend on thread scheduling.
class BatchError : public std::runtime_error {
 public:
  BatchError(std::size_t index, const std::string& message)
      : std::runtime_error("scenario " + std::to_string(index) + ": " + message), index_(index) {}
  std::size_t scenario_index() const { return index_; }

 private:
  std::size_t index_;
};

// 0 means "use all hardware threads".
int resolve_workers(int requested);

// Fire-line snapshots after `horizon` minutes for each scenario, simulated
// from start_fire. Output order matches input order and is independent of the
// worker count: workers pull index chunks from a shared counter and write
// only their own slots, and no randomness lives here.
std::vector<FireMap> simulate_batch(const SpreadModel& model, const std::vector<Scenario>& scenarios,
                                    const FireMap& start_fire, double horizon, int workers);

// result[j] = fitness of scenarios[j] against the target, with the start fire
// excluded as preburned. Same invariance guarantees as simulate_batch.
std::vector<FitnessValue> evaluate_batch(const SpreadModel& model, const EvalRequest& request, int workers);

}  // namespace essns
