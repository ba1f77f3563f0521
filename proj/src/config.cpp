#include "essns/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace essns {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) {
  throw std::runtime_error("config: " + what);
}

json scenario_to_json(const Scenario& s) {
  return json{{"model", s.model},   {"wind_spd", s.wind_spd}, {"wind_dir", s.wind_dir},
              {"m1", s.m1},         {"m10", s.m10},           {"m100", s.m100},
              {"mherb", s.mherb},   {"slope", s.slope},       {"aspect", s.aspect}};
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) config_error("scenario must be a JSON object");
  Scenario s;
  try {
    s.model = j.at("model").get<int>();
    s.wind_spd = j.at("wind_spd").get<double>();
    s.wind_dir = j.at("wind_dir").get<double>();
    s.m1 = j.at("m1").get<double>();
    s.m10 = j.at("m10").get<double>();
    s.m100 = j.at("m100").get<double>();
    s.mherb = j.at("mherb").get<double>();
    s.slope = j.at("slope").get<double>();
    s.aspect = j.at("aspect").get<double>();
  } catch (const json::exception& e) {
    config_error(std::string("bad scenario: ") + e.what());
  }
  return normalize_angles(s);
}

json spread_model_to_json(const SpreadModel& m) {
  return json{{"base_rates", m.base_rate},
              {"wind_coeff", m.wind_coeff},
              {"slope_coeff", m.slope_coeff},
              {"moisture_ext", m.moisture_ext}};
}

SpreadModel spread_model_from_json(const json& j) {
  SpreadModel m = SpreadModel::defaults();
  if (j.is_null()) return m;
  if (!j.is_object()) config_error("spread_model must be a JSON object");
  if (j.contains("base_rates")) {
    const auto rates = j.at("base_rates").get<std::vector<double>>();
    if (rates.size() != 13) config_error("base_rates needs exactly 13 entries");
    std::copy(rates.begin(), rates.end(), m.base_rate.begin());
  }
  if (j.contains("wind_coeff")) m.wind_coeff = j.at("wind_coeff").get<double>();
  if (j.contains("slope_coeff")) m.slope_coeff = j.at("slope_coeff").get<double>();
  if (j.contains("moisture_ext")) {
    const json& ext = j.at("moisture_ext");
    if (ext.is_number()) {
      m.moisture_ext.fill(ext.get<double>());
    } else {
      const auto values = ext.get<std::vector<double>>();
      if (values.size() != 13) config_error("moisture_ext needs 1 or 13 entries");
      std::copy(values.begin(), values.end(), m.moisture_ext.begin());
    }
  }
  return m;
}

NsGaParams ga_from_json(const json& j) {
  NsGaParams p;
  if (j.is_null()) config_error("missing \"ga\" section");
  if (!j.is_object()) config_error("ga must be a JSON object");
  p.population_size = j.value("population_size", p.population_size);
  // offspring count, archive and best-set sizes default relative to N
  p.offspring_count = j.value("offspring_count", p.population_size);
  p.archive_capacity = j.value("archive_capacity", 2 * p.population_size);
  p.bestset_capacity = j.value("bestset_capacity", p.population_size);
  p.mutation_rate = j.value("mutation_rate", p.mutation_rate);
  p.crossover_rate = j.value("crossover_rate", p.crossover_rate);
  p.neighbors_k = j.value("neighbors_k", p.neighbors_k);
  p.max_generations = j.value("max_generations", p.max_generations);
  p.fitness_threshold = j.value("fitness_threshold", p.fitness_threshold);
  return p;
}

json ga_to_json(const NsGaParams& p) {
  return json{{"population_size", p.population_size},
              {"offspring_count", p.offspring_count},
              {"mutation_rate", p.mutation_rate},
              {"crossover_rate", p.crossover_rate},
              {"neighbors_k", p.neighbors_k},
              {"max_generations", p.max_generations},
              {"fitness_threshold", p.fitness_threshold},
              {"archive_capacity", p.archive_capacity},
              {"bestset_capacity", p.bestset_capacity}};
}

json truth_to_json(const std::variant<SyntheticTruthSource, FileTruthSource>& truth) {
  if (const auto* syn = std::get_if<SyntheticTruthSource>(&truth)) {
    json cells = json::array();
    for (const auto& [r, c] : syn->ignition_cells) cells.push_back(json::array({r, c}));
    return json{{"type", "synthetic"}, {"scenario", scenario_to_json(syn->reference)}, {"ignition_cells", cells}};
  }
  const auto& files = std::get<FileTruthSource>(truth);
  return json{{"type", "files"}, {"paths", files.paths}};
}

std::variant<SyntheticTruthSource, FileTruthSource> truth_from_json(const json& j) {
  if (!j.is_object()) config_error("missing \"truth\" section");
  const std::string type = j.value("type", "");
  if (type == "synthetic") {
    SyntheticTruthSource syn;
    syn.reference = scenario_from_json(j.at("scenario"));
    if (!j.contains("ignition_cells") || !j.at("ignition_cells").is_array() || j.at("ignition_cells").empty())
      config_error("synthetic truth needs a nonempty ignition_cells array");
    for (const json& cell : j.at("ignition_cells")) {
      if (!cell.is_array() || cell.size() != 2) config_error("ignition cells are [row, col] pairs");
      syn.ignition_cells.emplace_back(cell.at(0).get<int>(), cell.at(1).get<int>());
    }
    return syn;
  }
  if (type == "files") {
    FileTruthSource files;
    files.paths = j.at("paths").get<std::vector<std::string>>();
    if (files.paths.empty()) config_error("file truth needs a nonempty path list");
    return files;
  }
  config_error("truth.type must be \"synthetic\" or \"files\"");
}

json config_to_json(const RunConfig& cfg) {
  return json{{"schema_version", kConfigSchemaVersion},
              {"grid", json{{"width", cfg.grid.width}, {"height", cfg.grid.height}, {"cell_size", cfg.grid.cell_size}}},
              {"spread_model", spread_model_to_json(cfg.model)},
              {"ga", ga_to_json(cfg.ga)},
              {"delta_t", cfg.delta_t},
              {"steps", cfg.steps},
              {"seed", cfg.seed},
              {"workers", cfg.workers},
              {"truth", truth_to_json(cfg.truth)},
              {"output_dir", cfg.output_dir}};
}

}  // namespace

void RunConfig::validate() const {
  grid.validate();
  model.validate();
  ga.validate();
  if (!(delta_t > 0.0)) config_error("delta_t must be positive");
  if (steps < 3) config_error("steps must be >= 3 (one calibration bootstrap plus a prediction)");
  if (workers < 0) config_error("workers must be >= 0");
  if (const auto* syn = std::get_if<SyntheticTruthSource>(&truth)) {
    if (!validate_scenario(syn->reference)) config_error("reference scenario is outside the parameter ranges");
    if (syn->ignition_cells.empty()) config_error("no ignition cells");
    for (const auto& [r, c] : syn->ignition_cells)
      if (r < 0 || r >= grid.height || c < 0 || c >= grid.width)
        config_error("ignition cell outside the grid");
  } else {
    const auto& files = std::get<FileTruthSource>(truth);
    if (static_cast<int>(files.paths.size()) != steps)
      config_error("file truth needs exactly `steps` fire-line paths");
  }
  if (output_dir.empty()) config_error("output_dir must not be empty");
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("top level must be a JSON object");
  const int schema = j.value("schema_version", kConfigSchemaVersion);
  if (schema != kConfigSchemaVersion) config_error("unsupported schema_version");

  RunConfig cfg;
  try {
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      cfg.grid = GridSpec{g.at("width").get<int>(), g.at("height").get<int>(), g.at("cell_size").get<double>()};
    }
    cfg.model = spread_model_from_json(j.contains("spread_model") ? j.at("spread_model") : json());
    cfg.ga = ga_from_json(j.contains("ga") ? j.at("ga") : json());
    cfg.delta_t = j.value("delta_t", cfg.delta_t);
    cfg.steps = j.value("steps", cfg.steps);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.workers = j.value("workers", cfg.workers);
    if (!j.contains("truth")) config_error("missing \"truth\" section");
    cfg.truth = truth_from_json(j.at("truth"));
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
  } catch (const json::exception& e) {
    config_error(std::string("bad value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string resolved_config_json(const RunConfig& cfg) { return config_to_json(cfg).dump(2) + "\n"; }

std::string manifest_json(const RunConfig& cfg) {
  json j = config_to_json(cfg);
  j["versions"] = json{{"program", "essns"}, {"version", kProgramVersion}, {"config_schema", kConfigSchemaVersion}};
  return j.dump(2) + "\n";
}

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    config_error(std::string("invalid scenario JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

}  // namespace essns
