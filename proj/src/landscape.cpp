#include "essns/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace essns {

namespace {

struct ParamRange {
  double lo;
  double hi;
  bool integer;
  bool angle;  // closed 0..360 on input, stored in [0,360)
};

// Ranges of the nine environmental input parameters.
constexpr ParamRange kRanges[kScenarioParamCount] = {
    {1, 13, true, false},     // model
    {0, 80, false, false},    // wind_spd
    {0, 360, false, true},    // wind_dir
    {1, 60, false, false},    // m1
    {1, 60, false, false},    // m10
    {1, 60, false, false},    // m100
    {30, 300, false, false},  // mherb
    {0, 81, false, false},    // slope
    {0, 360, false, true},    // aspect
};

constexpr const char* kParamNames[kScenarioParamCount] = {
    "model", "wind_spd", "wind_dir", "m1", "m10", "m100", "mherb", "slope", "aspect",
};

}  // namespace

void GridSpec::validate() const {
  if (width < 1 || height < 1) throw std::invalid_argument("grid dimensions must be >= 1");
  if (!(cell_size > 0.0)) throw std::invalid_argument("cell_size must be positive");
}

double scenario_param(const Scenario& s, int idx) {
  switch (idx) {
    case 0: return static_cast<double>(s.model);
    case 1: return s.wind_spd;
    case 2: return s.wind_dir;
    case 3: return s.m1;
    case 4: return s.m10;
    case 5: return s.m100;
    case 6: return s.mherb;
    case 7: return s.slope;
    case 8: return s.aspect;
    default: throw std::out_of_range("scenario parameter index");
  }
}

void set_scenario_param(Scenario& s, int idx, double value) {
  switch (idx) {
    case 0: s.model = static_cast<int>(std::llround(value)); break;
    case 1: s.wind_spd = value; break;
    case 2: s.wind_dir = value; break;
    case 3: s.m1 = value; break;
    case 4: s.m10 = value; break;
    case 5: s.m100 = value; break;
    case 6: s.mherb = value; break;
    case 7: s.slope = value; break;
    case 8: s.aspect = value; break;
    default: throw std::out_of_range("scenario parameter index");
  }
}

const char* scenario_param_name(int idx) {
  if (idx < 0 || idx >= kScenarioParamCount) throw std::out_of_range("scenario parameter index");
  return kParamNames[idx];
}

double random_param(Rng& rng, int idx) {
  const ParamRange& r = kRanges[idx];
  if (r.integer) return static_cast<double>(uniform_int(rng, static_cast<int>(r.lo), static_cast<int>(r.hi)));
  if (r.angle) return uniform_real(rng, 0.0, 360.0);  // [0,360)
  return uniform_real(rng, r.lo, r.hi);
}

bool validate_scenario(const Scenario& s) {
  for (int i = 0; i < kScenarioParamCount; ++i) {
    const ParamRange& r = kRanges[i];
    const double v = scenario_param(s, i);
    if (std::isnan(v)) return false;
    if (r.integer && v != std::floor(v)) return false;
    if (v < r.lo || v > r.hi) return false;
  }
  return true;
}

Scenario normalize_angles(Scenario s) {
  if (s.wind_dir == 360.0) s.wind_dir = 0.0;
  if (s.aspect == 360.0) s.aspect = 0.0;
  return s;
}

Scenario random_scenario(Rng& rng) {
  Scenario s;
  for (int i = 0; i < kScenarioParamCount; ++i) set_scenario_param(s, i, random_param(rng, i));
  return s;
}

FireMap FireMap::empty(const GridSpec& grid) {
  grid.validate();
  return FireMap{grid, std::vector<std::uint8_t>(grid.cell_count(), 0)};
}

int FireMap::burned_count() const {
  return static_cast<int>(std::count(burned.begin(), burned.end(), std::uint8_t{1}));
}

bool FireMap::subset_of(const FireMap& other) const {
  if (grid != other.grid) return false;
  for (std::size_t i = 0; i < burned.size(); ++i)
    if (burned[i] && !other.burned[i]) return false;
  return true;
}

void FireMap::validate() const {
  grid.validate();
  if (static_cast<int>(burned.size()) != grid.cell_count())
    throw std::invalid_argument("fire map size does not match its grid");
}

void IgnitionTimeMap::validate() const {
  grid.validate();
  if (static_cast<int>(time.size()) != grid.cell_count() ||
      static_cast<int>(initial.size()) != grid.cell_count())
    throw std::invalid_argument("ignition map size does not match its grid");
  for (std::size_t i = 0; i < time.size(); ++i) {
    if (time[i] < 0.0) throw std::invalid_argument("negative ignition time");
    if (initial[i] && time[i] != 0.0) throw std::invalid_argument("initial cell with nonzero time");
  }
}

FireMap burned_at(const IgnitionTimeMap& m, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("burned_at requires t >= 0");
  FireMap out = FireMap::empty(m.grid);
  for (int i = 0; i < m.grid.cell_count(); ++i)
    out.burned[i] = (m.initial[i] || (m.time[i] > 0.0 && m.time[i] <= t)) ? 1 : 0;
  return out;
}

void write_pgm(const FireMap& map, std::ostream& out) {
  map.validate();
  out << "P2\n" << map.grid.width << ' ' << map.grid.height << "\n255\n";
  for (int r = 0; r < map.grid.height; ++r) {
    for (int c = 0; c < map.grid.width; ++c) {
      if (c) out << ' ';
      out << (map.at(r, c) ? 255 : 0);
    }
    out << '\n';
  }
}

void write_pgm_file(const FireMap& map, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  write_pgm(map, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

// Reads the next PGM token, skipping whitespace and # comments.
std::string next_pgm_token(std::istream& in) {
  std::string tok;
  char ch;
  while (in.get(ch)) {
    if (ch == '#') {
      std::string line;
      std::getline(in, line);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(ch);
  }
  return tok;
}

long parse_pgm_int(std::istream& in, const char* what) {
  const std::string tok = next_pgm_token(in);
  if (tok.empty()) throw std::runtime_error(std::string("unexpected end of PGM while reading ") + what);
  try {
    return std::stol(tok);
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("malformed PGM ") + what + ": " + tok);
  }
}

}  // namespace

FireMap read_pgm(std::istream& in, double cell_size) {
  if (next_pgm_token(in) != "P2") throw std::runtime_error("not a plain-text PGM (expected P2)");
  const long w = parse_pgm_int(in, "width");
  const long h = parse_pgm_int(in, "height");
  const long maxval = parse_pgm_int(in, "maxval");
  if (w < 1 || h < 1 || maxval < 1 || maxval > 255) throw std::runtime_error("unsupported PGM header");
  GridSpec grid{static_cast<int>(w), static_cast<int>(h), cell_size};
  FireMap map = FireMap::empty(grid);
  for (int i = 0; i < grid.cell_count(); ++i) {
    const long v = parse_pgm_int(in, "pixel");
    if (v < 0 || v > maxval) throw std::runtime_error("PGM pixel out of range");
    map.burned[i] = v != 0 ? 1 : 0;
  }
  return map;
}

FireMap read_pgm_file(const std::filesystem::path& path, double cell_size) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open PGM: " + path.string());
  return read_pgm(in, cell_size);
}

void write_times_csv(const IgnitionTimeMap& m, std::ostream& out) {
  m.validate();
  char buf[64];
  for (int r = 0; r < m.grid.height; ++r) {
    for (int c = 0; c < m.grid.width; ++c) {
      const int i = m.grid.index(r, c);
      if (c) out << ',';
      if (m.is_initial(i)) {
        out << '0';
      } else if (m.time[i] > 0.0) {
        std::snprintf(buf, sizeof buf, "%.17g", m.time[i]);
        out << buf;
      } else {
        out << "-1";
      }
    }
    out << '\n';
  }
}

void write_times_csv_file(const IgnitionTimeMap& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  write_times_csv(m, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace essns
