#pragma once

#include <array>

#include "essns/landscape.hpp"

namespace essns {

// Constants of the simplified spread model. All rates are meters/minute.
struct SpreadModel {
  std::array<double, 13> base_rate{};     // per fuel model id 1..13
  double wind_coeff = 3.0;
  double slope_coeff = 2.0;
  std::array<double, 13> moisture_ext{};  // moisture of extinction, percent

  static SpreadModel defaults();
  double base_rate_for(int model) const;
  double moisture_ext_for(int model) const;
  void validate() const;
  bool operator==(const SpreadModel&) const = default;
};

// Weighted combination of the four moisture parameters; every one of them
// moves the spread rate so the whole search space stays live.
double effective_moisture(const Scenario& s);

// In [0.01, 1]: 1 - m_eff / extinction, floored so the rate never reaches 0.
double moisture_damping(const SpreadModel& model, const Scenario& s);

// Spread rate toward `heading` (degrees clockwise from North). Strictly
// positive and finite for every valid scenario.
double directional_rate(const SpreadModel& model, const Scenario& s, double heading_deg);

// Minimum-travel-time propagation from the initial fire line over the
// 8-neighbor graph; the travel cost of an edge is the center distance divided
// by the rate along that edge's heading. Cells first reached after t_end are
// reported as never ignited. Deterministic.
IgnitionTimeMap simulate(const GridSpec& grid, const SpreadModel& model, const Scenario& s,
                         const FireMap& initial, double t_end);

}  // namespace essns
