#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "essns/firesim.hpp"
#include "essns/landscape.hpp"
#include "essns/novelty.hpp"

namespace essns {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr const char* kProgramVersion = "1.0.0";

// Ground truth simulated from a reference scenario (closed-loop experiments).
struct SyntheticTruthSource {
  Scenario reference;
  std::vector<std::pair<int, int>> ignition_cells;  // (row, col)
};

// Ground truth loaded from PGM fire lines, one file per instant.
struct FileTruthSource {
  std::vector<std::string> paths;
};

struct RunConfig {
  GridSpec grid{64, 64, 10.0};
  SpreadModel model = SpreadModel::defaults();
  NsGaParams ga;
  double delta_t = 30.0;  // minutes per prediction step
  int steps = 5;          // number of truth instants t_0 .. t_{steps-1}
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = all hardware threads
  std::variant<SyntheticTruthSource, FileTruthSource> truth = SyntheticTruthSource{};
  std::string output_dir = "essns-out";

  void validate() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

// The config with every default made explicit; parse_config(resolved) yields
// the same RunConfig back.
std::string resolved_config_json(const RunConfig& cfg);

// Resolved config plus program/schema version info. Still loadable as a
// config, so a finished run can be reproduced from its manifest alone.
std::string manifest_json(const RunConfig& cfg);

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace essns
