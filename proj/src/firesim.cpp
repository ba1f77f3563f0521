#include "essns/firesim.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace essns {

namespace {

constexpr double kMinDamping = 0.01;
constexpr double kPi = 3.14159265358979323846;

double deg2rad(double deg) { return deg * (kPi / 180.0); }

double opposite(double angle_deg) {
  double a = angle_deg + 180.0;
  if (a >= 360.0) a -= 360.0;
  return a;
}

}  // namespace

SpreadModel SpreadModel::defaults() {
  SpreadModel m;
  for (int i = 0; i < 13; ++i) {
    m.base_rate[i] = 1.0 + 9.0 * i / 12.0;  // 1.0 .. 10.0 m/min across the 13 fuel models
    m.moisture_ext[i] = 30.0;
  }
  return m;
}

double SpreadModel::base_rate_for(int model) const {
  if (model < 1 || model > 13) throw std::invalid_argument("fuel model id out of range");
  return base_rate[model - 1];
}

double SpreadModel::moisture_ext_for(int model) const {
  if (model < 1 || model > 13) throw std::invalid_argument("fuel model id out of range");
  return moisture_ext[model - 1];
}

void SpreadModel::validate() const {
  for (int i = 0; i < 13; ++i) {
    if (!(base_rate[i] > 0.0) || !std::isfinite(base_rate[i]))
      throw std::invalid_argument("base_rate must be positive for all 13 fuel models");
    if (!(moisture_ext[i] > 0.0) || moisture_ext[i] > 100.0)
      throw std::invalid_argument("moisture_ext must lie in (0,100]");
  }
  if (!std::isfinite(wind_coeff) || wind_coeff < 0.0)
    throw std::invalid_argument("wind_coeff must be nonnegative");
  if (!std::isfinite(slope_coeff) || slope_coeff < 0.0)
    throw std::invalid_argument("slope_coeff must be nonnegative");
}

double effective_moisture(const Scenario& s) {
  return 0.6 * s.m1 + 0.2 * s.m10 + 0.1 * s.m100 + 0.1 * (s.mherb / 5.0);
}

double moisture_damping(const SpreadModel& model, const Scenario& s) {
  const double damp = 1.0 - effective_moisture(s) / model.moisture_ext_for(s.model);
  return std::min(1.0, std::max(kMinDamping, damp));
}

double directional_rate(const SpreadModel& model, const Scenario& s, double heading_deg) {
  model.validate();
  if (!validate_scenario(s)) throw std::invalid_argument("scenario outside the parameter table ranges");

  // wind_dir is the direction the wind blows FROM; fire is pushed the
  // opposite way. Upslope is opposite the direction the surface faces.
  const double wind_to = opposite(s.wind_dir);
  const double upslope = opposite(s.aspect);

  const double wind_align = std::max(0.0, std::cos(deg2rad(heading_deg - wind_to)));
  const double slope_align = std::max(0.0, std::cos(deg2rad(heading_deg - upslope)));

  const double wind_factor = 1.0 + model.wind_coeff * (s.wind_spd / 80.0) * wind_align;
  const double slope_factor = 1.0 + model.slope_coeff * std::tan(deg2rad(s.slope)) * slope_align;

  return model.base_rate_for(s.model) * moisture_damping(model, s) * wind_factor * slope_factor;
}

IgnitionTimeMap simulate(const GridSpec& grid, const SpreadModel& model, const Scenario& s,
                         const FireMap& initial, double t_end) {
  grid.validate();
  initial.validate();
  if (initial.grid != grid) throw std::invalid_argument("initial fire line grid mismatch");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (initial.burned_count() == 0) throw std::invalid_argument("initial fire line is empty");

  // 8-neighbor offsets with compass headings (row 0 is the north edge).
  static constexpr int kDr[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
  static constexpr int kDc[8] = {0, 1, 1, 1, 0, -1, -1, -1};
  static constexpr double kHeading[8] = {0, 45, 90, 135, 180, 225, 270, 315};

  // The scenario is uniform over the grid, so each of the 8 edge costs is a
  // single constant.
  const double sqrt2 = std::sqrt(2.0);
  double cost[8];
  for (int d = 0; d < 8; ++d) {
    const double dist = grid.cell_size * ((kDr[d] != 0 && kDc[d] != 0) ? sqrt2 : 1.0);
    cost[d] = dist / directional_rate(model, s, kHeading[d]);
  }

  const int n = grid.cell_count();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);

  // Label-setting shortest path from all initial cells; queue ties break on
  // the lower cell index.
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  for (int i = 0; i < n; ++i) {
    if (initial.burned[i]) {
      dist[i] = 0.0;
      queue.emplace(0.0, i);
    }
  }
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    const int r = u / grid.width;
    const int c = u % grid.width;
    for (int k = 0; k < 8; ++k) {
      const int nr = r + kDr[k];
      const int nc = c + kDc[k];
      if (nr < 0 || nr >= grid.height || nc < 0 || nc >= grid.width) continue;
      const int v = grid.index(nr, nc);
      const double nd = d + cost[k];
      if (nd < dist[v]) {
        dist[v] = nd;
        queue.emplace(nd, v);
      }
    }
  }

  IgnitionTimeMap out{grid, std::vector<double>(n, 0.0), std::vector<std::uint8_t>(n, 0)};
  for (int i = 0; i < n; ++i) {
    if (initial.burned[i]) {
      out.initial[i] = 1;
    } else if (dist[i] <= t_end) {
      out.time[i] = dist[i];
    }
    // dist > t_end: never ignited within the horizon (time stays 0)
  }
  return out;
}

}  // namespace essns
