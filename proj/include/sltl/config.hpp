#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sltl/circuit.hpp"
#include "sltl/modes.hpp"

namespace sltl {

struct QubitGridConfig {
  std::vector<double> delta0_over_wsl = {0.75, 1.0, 1.25, 1.5};
  double g_over_wsl_min = 0.0;
  double g_over_wsl_max = 0.3;
  int g_count = 121;

  std::vector<double> g_grid_over_wsl() const;
};

struct SolverConfig {
  int scan_points_per_mode = 20;
  double root_tol_rel = 0.0;  // 0 = refine roots to machine precision
  double renorm_tol_rel = 1e-10;
  int renorm_max_iter = 10000;
  double localization_floor_rel = 1e-8;
  double jump_threshold_rel = 0.05;
  int fit_edge_exclusion_modes = 5;
  int profile_rh_samples = 201;
};

struct OutputConfig {
  std::string directory = ".";
  std::string format = "csv";  // csv | json, where a choice exists
};

/// Full run configuration. JSON I/O is strict: unknown keys are rejected
/// with the offending path in the message, and re-emitting a loaded config
/// reproduces the normalized form byte for byte.
struct RunConfig {
  SuperlatticeSpec superlattice;
  RightHandedSpec right_handed;
  QubitGridConfig qubit;
  SolverConfig solver;
  OutputConfig output;

  HybridLineSpec line() const { return {superlattice, right_handed}; }

  /// The built-in reference parameter set: omega_sl ~ 9.13e10 rad/s,
  /// omega_r ~ 7.30e10 rad/s, matched impedance ~ 54.8 ohm, ratio 2,
  /// 200 supercells.
  static RunConfig paper_defaults();

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
  nlohmann::json to_json() const;
  void save(const std::string& path) const;

  void validate() const;
};

}  // namespace sltl
