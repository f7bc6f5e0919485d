#include "sltl/config.hpp"

#include <fstream>
#include <stdexcept>

namespace sltl {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const char* block,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument("unknown config key '" + std::string(block) + "." + key + "'");
    }
  }
}

// A block may be omitted as a whole (its defaults apply), but a present
// block must be complete so that partial configs fail loudly.
template <typename T>
void read(const json& j, const char* block, const char* key, T& out) {
  if (!j.contains(key)) {
    throw std::invalid_argument("missing config key '" + std::string(block) + "." + key + "'");
  }
  try {
    j.at(key).get_to(out);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config key '" + std::string(block) + "." + key +
                                "': " + e.what());
  }
}

}  // namespace

std::vector<double> QubitGridConfig::g_grid_over_wsl() const {
  std::vector<double> grid(g_count);
  if (g_count == 1) {
    grid[0] = g_over_wsl_min;
    return grid;
  }
  const double step = (g_over_wsl_max - g_over_wsl_min) / static_cast<double>(g_count - 1);
  for (int i = 0; i < g_count; ++i) {
    grid[i] = g_over_wsl_min + static_cast<double>(i) * step;
  }
  return grid;
}

RunConfig RunConfig::paper_defaults() {
  RunConfig config;
  // L C = 1.2e-22 s^2 and Z = sqrt(3000) ohm fix the products; this split
  // realizes them with round element values.
  config.superlattice.inductance = 6.0e-10;
  config.superlattice.capacitance = 2.0e-13;
  config.superlattice.ratio = 2.0;
  config.superlattice.supercell_count = 200;
  config.superlattice.supercell_length = 1.0e-4;

  config.right_handed.cell_inductance = 7.5e-10;
  config.right_handed.cell_capacitance = 2.5e-13;
  config.right_handed.cell_count = 20;
  config.right_handed.length = 0.01;
  return config;
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config root must be a JSON object");
  reject_unknown_keys(j, "<root>", {"superlattice", "right_handed", "qubit", "solver", "output"});

  RunConfig c = paper_defaults();

  if (j.contains("superlattice")) {
    const json& b = j.at("superlattice");
    reject_unknown_keys(b, "superlattice",
                        {"inductance_H", "capacitance_F", "ratio", "supercell_count",
                         "supercell_length_m"});
    read(b, "superlattice", "inductance_H", c.superlattice.inductance);
    read(b, "superlattice", "capacitance_F", c.superlattice.capacitance);
    read(b, "superlattice", "ratio", c.superlattice.ratio);
    read(b, "superlattice", "supercell_count", c.superlattice.supercell_count);
    read(b, "superlattice", "supercell_length_m", c.superlattice.supercell_length);
  }
  if (j.contains("right_handed")) {
    const json& b = j.at("right_handed");
    reject_unknown_keys(b, "right_handed",
                        {"cell_inductance_H", "cell_capacitance_F", "cell_count", "length_m"});
    read(b, "right_handed", "cell_inductance_H", c.right_handed.cell_inductance);
    read(b, "right_handed", "cell_capacitance_F", c.right_handed.cell_capacitance);
    read(b, "right_handed", "cell_count", c.right_handed.cell_count);
    read(b, "right_handed", "length_m", c.right_handed.length);
  }
  if (j.contains("qubit")) {
    const json& b = j.at("qubit");
    reject_unknown_keys(b, "qubit", {"delta0_over_wsl", "g_over_wsl"});
    read(b, "qubit", "delta0_over_wsl", c.qubit.delta0_over_wsl);
    if (!b.contains("g_over_wsl")) {
      throw std::invalid_argument("missing config key 'qubit.g_over_wsl'");
    }
    const json& g = b.at("g_over_wsl");
    reject_unknown_keys(g, "qubit.g_over_wsl", {"min", "max", "count"});
    read(g, "qubit.g_over_wsl", "min", c.qubit.g_over_wsl_min);
    read(g, "qubit.g_over_wsl", "max", c.qubit.g_over_wsl_max);
    read(g, "qubit.g_over_wsl", "count", c.qubit.g_count);
  }
  if (j.contains("solver")) {
    const json& b = j.at("solver");
    reject_unknown_keys(b, "solver",
                        {"scan_points_per_mode", "root_tol_rel", "renorm_tol_rel",
                         "renorm_max_iter", "localization_floor_rel", "jump_threshold_rel",
                         "fit_edge_exclusion_modes", "profile_rh_samples"});
    read(b, "solver", "scan_points_per_mode", c.solver.scan_points_per_mode);
    read(b, "solver", "root_tol_rel", c.solver.root_tol_rel);
    read(b, "solver", "renorm_tol_rel", c.solver.renorm_tol_rel);
    read(b, "solver", "renorm_max_iter", c.solver.renorm_max_iter);
    read(b, "solver", "localization_floor_rel", c.solver.localization_floor_rel);
    read(b, "solver", "jump_threshold_rel", c.solver.jump_threshold_rel);
    read(b, "solver", "fit_edge_exclusion_modes", c.solver.fit_edge_exclusion_modes);
    read(b, "solver", "profile_rh_samples", c.solver.profile_rh_samples);
  }
  if (j.contains("output")) {
    const json& b = j.at("output");
    reject_unknown_keys(b, "output", {"directory", "format"});
    read(b, "output", "directory", c.output.directory);
    read(b, "output", "format", c.output.format);
  }

  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config parse error in '" + path + "': " + e.what());
  }
  return from_json(j);
}

nlohmann::json RunConfig::to_json() const {
  json j;
  j["superlattice"] = {
      {"inductance_H", superlattice.inductance},
      {"capacitance_F", superlattice.capacitance},
      {"ratio", superlattice.ratio},
      {"supercell_count", superlattice.supercell_count},
      {"supercell_length_m", superlattice.supercell_length},
  };
  j["right_handed"] = {
      {"cell_inductance_H", right_handed.cell_inductance},
      {"cell_capacitance_F", right_handed.cell_capacitance},
      {"cell_count", right_handed.cell_count},
      {"length_m", right_handed.length},
  };
  j["qubit"] = {
      {"delta0_over_wsl", qubit.delta0_over_wsl},
      {"g_over_wsl", {{"min", qubit.g_over_wsl_min}, {"max", qubit.g_over_wsl_max},
                      {"count", qubit.g_count}}},
  };
  j["solver"] = {
      {"scan_points_per_mode", solver.scan_points_per_mode},
      {"root_tol_rel", solver.root_tol_rel},
      {"renorm_tol_rel", solver.renorm_tol_rel},
      {"renorm_max_iter", solver.renorm_max_iter},
      {"localization_floor_rel", solver.localization_floor_rel},
      {"jump_threshold_rel", solver.jump_threshold_rel},
      {"fit_edge_exclusion_modes", solver.fit_edge_exclusion_modes},
      {"profile_rh_samples", solver.profile_rh_samples},
  };
  j["output"] = {
      {"directory", output.directory},
      {"format", output.format},
  };
  return j;
}

void RunConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file '" + path + "'");
  out << to_json().dump(2) << '\n';
}

void RunConfig::validate() const {
  superlattice.validate();
  right_handed.validate();
  if (qubit.delta0_over_wsl.empty()) {
    throw std::invalid_argument("qubit.delta0_over_wsl must list at least one value");
  }
  for (double d : qubit.delta0_over_wsl) {
    if (!(d > 0.0)) throw std::invalid_argument("qubit.delta0_over_wsl entries must be positive");
  }
  if (qubit.g_over_wsl_min < 0.0) {
    throw std::invalid_argument("qubit.g_over_wsl.min must be non-negative");
  }
  if (qubit.g_over_wsl_max < qubit.g_over_wsl_min) {
    throw std::invalid_argument("qubit.g_over_wsl.max must be >= min");
  }
  if (qubit.g_count < 1) throw std::invalid_argument("qubit.g_over_wsl.count must be at least 1");
  if (solver.scan_points_per_mode < 1) {
    throw std::invalid_argument("solver.scan_points_per_mode must be at least 1");
  }
  if (solver.root_tol_rel < 0.0) {
    throw std::invalid_argument("solver.root_tol_rel must be non-negative");
  }
  if (!(solver.renorm_tol_rel > 0.0)) {
    throw std::invalid_argument("solver.renorm_tol_rel must be positive");
  }
  if (solver.renorm_max_iter < 1) {
    throw std::invalid_argument("solver.renorm_max_iter must be at least 1");
  }
  if (!(solver.localization_floor_rel > 0.0)) {
    throw std::invalid_argument("solver.localization_floor_rel must be positive");
  }
  if (!(solver.jump_threshold_rel > 0.0)) {
    throw std::invalid_argument("solver.jump_threshold_rel must be positive");
  }
  if (solver.fit_edge_exclusion_modes < 0) {
    throw std::invalid_argument("solver.fit_edge_exclusion_modes must be non-negative");
  }
  if (solver.profile_rh_samples < 2) {
    throw std::invalid_argument("solver.profile_rh_samples must be at least 2");
  }
  if (output.format != "csv" && output.format != "json") {
    throw std::invalid_argument("output.format must be 'csv' or 'json'");
  }
}

}  // namespace sltl
