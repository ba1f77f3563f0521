#pragma once

#include <compare>

#include "essns/landscape.hpp"

namespace essns {

struct FitnessValue {
  double value = 0.0;

  FitnessValue() = default;
  explicit FitnessValue(double v);  // throws unless v lies in [0,1]
  auto operator<=>(const FitnessValue&) const = default;
};

// Jaccard index between the newly burned cells of two maps, with everything
// burned before the interval removed from both sides. Returns 1 when neither
// map burned anything new: no fire predicted and no fire observed is a
// perfect prediction, and the degenerate 0/0 must not poison the pipeline.
FitnessValue jaccard_fitness(const FireMap& real, const FireMap& sim, const FireMap& preburned);

}  // namespace essns
