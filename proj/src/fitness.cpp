#include "essns/fitness.hpp"

#include <stdexcept>

namespace essns {

FitnessValue::FitnessValue(double v) : value(v) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("fitness must lie in [0,1]");
}

FitnessValue jaccard_fitness(const FireMap& real, const FireMap& sim, const FireMap& preburned) {
  if (real.grid != sim.grid || real.grid != preburned.grid)
    throw std::invalid_argument("jaccard_fitness requires maps on one grid");

  long long intersection = 0;
  long long unon = 0;
  for (std::size_t i = 0; i < real.burned.size(); ++i) {
    if (preburned.burned[i]) continue;
    const bool a = real.burned[i] != 0;
    const bool b = sim.burned[i] != 0;
    if (a && b) ++intersection;
    if (a || b) ++unon;
  }
  if (unon == 0) return FitnessValue(1.0);
  return FitnessValue(static_cast<double>(intersection) / static_cast<double>(unon));
}

}  // namespace essns
