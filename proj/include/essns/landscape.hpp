#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "essns/rng.hpp"

namespace essns {

struct GridSpec {
  int width = 0;
  int height = 0;
  double cell_size = 0.0;  // meters per side of a (square) cell

  int cell_count() const { return width * height; }
  int index(int row, int col) const { return row * width + col; }
  bool operator==(const GridSpec&) const = default;
  void validate() const;
};

// One environmental scenario: the genotype the search runs over. Angles are
// degrees clockwise from North; an input of exactly 360 normalizes to 0.
struct Scenario {
  int model = 1;          // fuel model id, 1..13
  double wind_spd = 0.0;  // miles/hour
  double wind_dir = 0.0;  // direction the wind blows FROM
  double m1 = 1.0;        // dead fuel moisture (1 h lag), percent
  double m10 = 1.0;       // dead fuel moisture (10 h lag), percent
  double m100 = 1.0;      // dead fuel moisture (100 h lag), percent
  double mherb = 30.0;    // live herbaceous fuel moisture, percent
  double slope = 0.0;     // degrees
  double aspect = 0.0;    // direction the surface faces

  bool operator==(const Scenario&) const = default;
};

inline constexpr int kScenarioParamCount = 9;

// Indexed parameter access, used by crossover and mutation.
double scenario_param(const Scenario& s, int idx);
void set_scenario_param(Scenario& s, int idx, double value);
const char* scenario_param_name(int idx);

// Fresh uniform draw from one parameter's range.
double random_param(Rng& rng, int idx);

// True iff every field lies inside its documented range (angles of exactly
// 360 count as 0).
bool validate_scenario(const Scenario& s);

// Maps wind_dir/aspect of exactly 360 to 0.
Scenario normalize_angles(Scenario s);

// Uniform draw over the whole parameter space; always valid.
Scenario random_scenario(Rng& rng);

// Set of burned cells at one time instant (a fire line).
struct FireMap {
  GridSpec grid;
  std::vector<std::uint8_t> burned;  // 0/1 per cell, row-major

  static FireMap empty(const GridSpec& grid);
  bool at(int row, int col) const { return burned[grid.index(row, col)] != 0; }
  void set(int row, int col, bool value) { burned[grid.index(row, col)] = value ? 1 : 0; }
  int burned_count() const;
  bool subset_of(const FireMap& other) const;
  bool operator==(const FireMap&) const = default;
  void validate() const;
};

// Simulator output: per-cell ignition time in minutes. time > 0 means the
// cell ignited at that instant; cells of the initial fire line are flagged
// separately so "never ignited" (time == 0, not initial) cannot collide with
// "burning from the start".
struct IgnitionTimeMap {
  GridSpec grid;
  std::vector<double> time;
  std::vector<std::uint8_t> initial;

  bool is_initial(int idx) const { return initial[idx] != 0; }
  bool ignited(int idx) const { return initial[idx] != 0 || time[idx] > 0.0; }
  void validate() const;
};

// Snapshot of the fire line at instant t: initial cells plus every cell with
// 0 < time <= t.
FireMap burned_at(const IgnitionTimeMap& m, double t);

// Plain-text PGM (P2), 0 = unburned, 255 = burned.
void write_pgm(const FireMap& map, std::ostream& out);
void write_pgm_file(const FireMap& map, const std::filesystem::path& path);
FireMap read_pgm(std::istream& in, double cell_size);
FireMap read_pgm_file(const std::filesystem::path& path, double cell_size);

// Row-major CSV, one grid row per line; -1 marks never-ignited cells.
void write_times_csv(const IgnitionTimeMap& m, std::ostream& out);
void write_times_csv_file(const IgnitionTimeMap& m, const std::filesystem::path& path);

}  // namespace essns
