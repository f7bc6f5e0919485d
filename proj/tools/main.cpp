// sltl: spectral properties of a composite left-handed-superlattice /
// right-handed transmission line, and the spin-boson phase diagram of an
// embedded qubit driven by that spectrum. Every subcommand is
// deterministic: a fixed config yields byte-identical output files.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sltl/config.hpp"
#include "sltl/dispersion.hpp"
#include "sltl/dom.hpp"
#include "sltl/format.hpp"
#include "sltl/modes.hpp"
#include "sltl/spinboson.hpp"

namespace {

using nlohmann::json;
using namespace sltl;

struct GlobalArgs {
  std::string config_path;
  bool paper_defaults = false;
  std::string out_dir;
  std::string format;
  std::vector<std::string> overrides;
  bool seedless = false;
};

// Applies "a.b.c=value" onto the config JSON; the value parses as JSON
// when possible and falls back to a plain string.
void apply_override(json& j, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw std::invalid_argument("--set expects key.path=value, got '" + spec + "'");
  }
  const std::string path = spec.substr(0, eq);
  const std::string raw = spec.substr(eq + 1);

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }

  json* node = &j;
  std::stringstream parts(path);
  std::string key;
  std::vector<std::string> keys;
  while (std::getline(parts, key, '.')) keys.push_back(key);
  if (keys.empty()) throw std::invalid_argument("--set key path is empty");
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) node = &(*node)[keys[i]];
  (*node)[keys.back()] = value;
}

RunConfig build_config(const GlobalArgs& args) {
  json j;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw std::runtime_error("cannot open config file '" + args.config_path + "'");
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("config parse error in '" + args.config_path + "': " + e.what());
    }
  } else {
    j = RunConfig::paper_defaults().to_json();
  }
  for (const std::string& o : args.overrides) apply_override(j, o);
  RunConfig config = RunConfig::from_json(j);
  if (!args.out_dir.empty()) config.output.directory = args.out_dir;
  if (!args.format.empty()) config.output.format = args.format;
  return config;
}

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.output.directory);
  const auto path = std::filesystem::path(config.output.directory) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write output file '" + path.string() + "'");
  return out;
}

void write_json_file(const RunConfig& config, const std::string& name, const json& j) {
  std::ofstream out = open_output(config, name);
  out << j.dump(2) << '\n';
}

json edges_json(const BandEdges& e, double wsl) {
  return json{
      {"omega_1minus_rad_s", e.lower_min},
      {"omega_1plus_rad_s", e.lower_max},
      {"omega_2_rad_s", e.upper_min},
      {"gap_width_rad_s", e.gap_width()},
      {"band1_width_rad_s", e.band1_width()},
      {"omega_1minus_over_wsl", e.lower_min / wsl},
      {"omega_1plus_over_wsl", e.lower_max / wsl},
      {"omega_2_over_wsl", e.upper_min / wsl},
      {"gap_width_over_wsl", e.gap_width() / wsl},
      {"band1_width_over_wsl", e.band1_width() / wsl},
  };
}

std::vector<ModeSolution> solve_band(const HybridLineSpec& line, Band band,
                                     const SolverConfig& solver,
                                     std::vector<std::string>* warnings) {
  FindModesOptions options;
  options.root_tol_rel = solver.root_tol_rel;
  options.warnings = warnings;
  const int points = solver.scan_points_per_mode * line.sl.supercell_count;
  return find_modes(line, band, points, options);
}

std::vector<ModeSolution> solve_both_bands(const HybridLineSpec& line, const SolverConfig& solver,
                                           std::vector<std::string>* warnings,
                                           std::size_t* count1 = nullptr,
                                           std::size_t* count2 = nullptr) {
  std::vector<ModeSolution> all = solve_band(line, Band::Band1, solver, warnings);
  if (count1) *count1 = all.size();
  const auto band2 = solve_band(line, Band::Band2, solver, warnings);
  if (count2) *count2 = band2.size();
  all.insert(all.end(), band2.begin(), band2.end());
  return all;
}

std::vector<double> sorted_frequencies(const std::vector<ModeSolution>& modes) {
  std::vector<double> freqs;
  freqs.reserve(modes.size());
  for (const ModeSolution& m : modes) freqs.push_back(m.omega);
  std::sort(freqs.begin(), freqs.end());
  return freqs;
}

int cmd_dispersion(const RunConfig& config, int k_points) {
  const HybridLineSpec line = config.line();
  const double wsl = line.sl.resonance();
  const BandEdges edges = band_edges(line.sl);
  const double k_edge = std::numbers::pi / line.sl.supercell_length;

  std::ofstream out = open_output(config, "dispersion.csv");
  out << "# band_edges_rad_s: omega_1minus=" << format_double(edges.lower_min)
      << " omega_1plus=" << format_double(edges.lower_max)
      << " omega_2=" << format_double(edges.upper_min)
      << " gap_width=" << format_double(edges.gap_width())
      << " band1_width=" << format_double(edges.band1_width()) << "\n";
  out << "# omega_sl_rad_s=" << format_double(wsl) << "\n";
  out << "k_rad_per_m,omega_rad_s,omega_over_wsl,branch\n";

  // The Lower grid includes k = 0; the Upper grid starts one step in
  // because that branch is unbounded at k = 0. k_points rows per branch.
  for (int i = 0; i < k_points; ++i) {
    const double k = k_points == 1 ? 0.0 : k_edge * i / (k_points - 1);
    const double w = sl_dispersion(line.sl, k, Branch::Lower).value();
    out << format_double(k) << ',' << format_double(w) << ',' << format_double(w / wsl)
        << ",lower\n";
  }
  for (int i = 1; i <= k_points; ++i) {
    const double k = k_edge * i / k_points;
    const double w = sl_dispersion(line.sl, k, Branch::Upper).value();
    out << format_double(k) << ',' << format_double(w) << ',' << format_double(w / wsl)
        << ",upper\n";
  }
  return 0;
}

int cmd_band_edges(const RunConfig& config) {
  const HybridLineSpec line = config.line();
  const double wsl = line.sl.resonance();
  const BandEdges edges = band_edges(line.sl);

  if (config.output.format == "csv") {
    std::ofstream out = open_output(config, "band_edges.csv");
    out << "omega_1minus_rad_s,omega_1plus_rad_s,omega_2_rad_s,gap_width_rad_s,"
           "band1_width_rad_s,omega_sl_rad_s\n";
    out << format_double(edges.lower_min) << ',' << format_double(edges.lower_max) << ','
        << format_double(edges.upper_min) << ',' << format_double(edges.gap_width()) << ','
        << format_double(edges.band1_width()) << ',' << format_double(wsl) << '\n';
  } else {
    write_json_file(config, "band_edges.json",
                    json{{"omega_sl_rad_s", wsl}, {"band_edges", edges_json(edges, wsl)}});
  }
  return 0;
}

int cmd_modes(const RunConfig& config, const std::string& band_arg) {
  const HybridLineSpec line = config.line();
  const double wsl = line.sl.resonance();
  std::vector<std::string> warnings;

  std::vector<Band> bands;
  if (band_arg == "1") bands = {Band::Band1};
  else if (band_arg == "2") bands = {Band::Band2};
  else bands = {Band::Band1, Band::Band2};

  std::size_t count1 = 0;
  std::size_t count2 = 0;
  std::ofstream out = open_output(config, "modes.csv");
  out << "band,index,omega_rad_s,omega_over_wsl,k_sl_rad_per_m,k_r_rad_per_m,alpha,"
         "re_beta,im_beta,residual_V,residual_scale_V\n";
  for (Band band : bands) {
    const auto modes = solve_band(line, band, config.solver, &warnings);
    (band == Band::Band1 ? count1 : count2) = modes.size();
    for (const ModeSolution& m : modes) {
      out << (band == Band::Band1 ? 1 : 2) << ',' << m.index << ',' << format_double(m.omega)
          << ',' << format_double(m.omega / wsl) << ',' << format_double(m.k_sl) << ','
          << format_double(m.k_r) << ',' << format_double(m.alpha) << ','
          << format_double(m.beta.real()) << ',' << format_double(m.beta.imag()) << ','
          << format_double(self_consistency_residual(line, m.omega)) << ','
          << format_double(self_consistency_scale(line, m.omega)) << '\n';
    }
  }

  write_json_file(config, "modes.json",
                  json{{"band1_count", count1},
                       {"band2_count", count2},
                       {"band_edges", edges_json(band_edges(line.sl), wsl)},
                       {"rh_cutoff_rad_s", line.rh.cutoff()},
                       {"warnings", warnings}});
  return 0;
}

std::vector<int> parse_indices(const std::string& arg) {
  std::vector<int> indices;
  std::stringstream parts(arg);
  std::string piece;
  while (std::getline(parts, piece, ',')) {
    const auto dash = piece.find('-');
    if (dash == std::string::npos) {
      indices.push_back(std::stoi(piece));
    } else {
      const int lo = std::stoi(piece.substr(0, dash));
      const int hi = std::stoi(piece.substr(dash + 1));
      for (int i = lo; i <= hi; ++i) indices.push_back(i);
    }
  }
  if (indices.empty()) throw std::invalid_argument("no mode indices given");
  return indices;
}

int cmd_profile(const RunConfig& config, const std::string& band_arg,
                const std::string& indices_arg) {
  const HybridLineSpec line = config.line();
  const double wsl = line.sl.resonance();
  const Band band = band_arg == "2" ? Band::Band2 : Band::Band1;
  const std::vector<int> indices = parse_indices(indices_arg);

  std::vector<std::string> warnings;
  const auto modes = solve_band(line, band, config.solver, &warnings);

  json summary;
  summary["band"] = band_arg == "2" ? 2 : 1;
  summary["warnings"] = warnings;
  json mode_list = json::array();

  for (int idx : indices) {
    if (idx < 1 || idx > static_cast<int>(modes.size())) {
      throw std::invalid_argument("mode index " + std::to_string(idx) +
                                  " out of range (band has " + std::to_string(modes.size()) +
                                  " modes)");
    }
    const ModeSolution& m = modes[idx - 1];
    const ModeProfile profile = mode_profile(line, m, config.solver.profile_rh_samples);

    const std::string name = "profile_band" + std::string(band_arg == "2" ? "2" : "1") + "_mode" +
                             std::to_string(idx) + ".csv";
    std::ofstream out = open_output(config, name);
    out << "z_m,re_V,im_V,re_I,im_I,segment\n";
    for (const auto& s : profile.samples) {
      out << format_double(s.z) << ',' << format_double(s.voltage.real()) << ','
          << format_double(s.voltage.imag()) << ',' << format_double(s.current.real()) << ','
          << format_double(s.current.imag()) << ',' << (s.superlattice ? "sl" : "rh") << '\n';
    }
    mode_list.push_back(json{{"index", idx},
                             {"omega_rad_s", m.omega},
                             {"omega_over_wsl", m.omega / wsl},
                             {"file", name}});
  }
  summary["modes"] = mode_list;
  write_json_file(config, "profile.json", summary);
  return 0;
}

int cmd_dom(const RunConfig& config) {
  const HybridLineSpec line = config.line();
  const BandEdges edges = band_edges(line.sl);
  std::vector<std::string> warnings;

  const std::vector<ModeSolution> modes = solve_both_bands(line, config.solver, &warnings);
  const DomCurve numerical = dom_numerical(modes, &warnings);
  const PiecewiseDomFit fit =
      fit_piecewise_dom(numerical, edges, config.solver.fit_edge_exclusion_modes);

  std::ofstream out = open_output(config, "dom.csv");
  out << "omega_rad_s,dom_s_per_rad,method\n";
  for (const DomSample& s : numerical.samples) {
    out << format_double(s.omega) << ',' << format_double(s.density) << ",numerical\n";
  }
  for (const DomSample& s : numerical.samples) {
    out << format_double(s.omega) << ',' << format_double(dom_analytical(line, s.omega))
        << ",analytical\n";
  }
  for (const DomSample& s : numerical.samples) {
    out << format_double(s.omega) << ','
        << format_double(piecewise_dom(s.omega, fit.alpha1, fit.alpha2, edges))
        << ",piecewise_fit\n";
  }

  write_json_file(config, "dom.json",
                  json{{"alpha1", fit.alpha1},
                       {"alpha2", fit.alpha2},
                       {"band1_residual_rel", fit.band1_residual_rel},
                       {"band2_residual_rel", fit.band2_residual_rel},
                       {"band1_fit_samples", fit.band1_samples},
                       {"band2_fit_samples", fit.band2_samples},
                       {"band_edges", edges_json(edges, line.sl.resonance())},
                       {"warnings", warnings}});
  return 0;
}

RenormalizationOptions renorm_options(const SolverConfig& solver) {
  RenormalizationOptions options;
  options.tol_rel = solver.renorm_tol_rel;
  options.max_iter = solver.renorm_max_iter;
  options.floor_rel = solver.localization_floor_rel;
  return options;
}

int cmd_renormalize(const RunConfig& config) {
  const HybridLineSpec line = config.line();
  const double wsl = line.sl.resonance();
  const BandEdges edges = band_edges(line.sl);
  std::vector<std::string> warnings;

  const std::vector<ModeSolution> modes = solve_both_bands(line, config.solver, &warnings);
  const std::vector<double> freqs = sorted_frequencies(modes);
  const PiecewiseDomFit fit = fit_piecewise_dom(dom_numerical(modes, nullptr), edges,
                                                config.solver.fit_edge_exclusion_modes);
  const DomCurve fit_curve = make_piecewise_curve(fit, edges);

  const RenormalizationOptions options = renorm_options(config.solver);
  std::ofstream out = open_output(config, "renormalize.csv");
  out << "method,delta0_rad_s,delta0_over_wsl,g_rad_s,g_over_wsl,delta_eff_rad_s,"
         "delta_eff_over_wsl,log_delta_ratio,iterations,converged,phase\n";

  const auto g_grid = config.qubit.g_grid_over_wsl();
  for (double d0 : config.qubit.delta0_over_wsl) {
    for (double gf : g_grid) {
      const QubitSpec qubit{d0 * wsl, gf * wsl};
      const RenormalizationResult disc = renormalize_discrete(freqs, qubit, edges, options);
      const RenormalizationResult cont = renormalize_continuum(fit_curve, qubit, options);
      for (const auto& [method, r] :
           {std::pair<const char*, const RenormalizationResult*>{"discrete", &disc},
            {"continuum", &cont}}) {
        out << method << ',' << format_double(qubit.bare_tunneling) << ',' << format_double(d0)
            << ',' << format_double(qubit.coupling) << ',' << format_double(gf) << ','
            << format_double(r->delta_eff) << ',' << format_double(r->delta_eff / wsl) << ','
            << format_double(r->log_delta_ratio) << ',' << r->iterations << ','
            << (r->converged ? 1 : 0) << ',' << to_string(r->phase) << '\n';
      }
    }
  }

  write_json_file(config, "renormalize.json",
                  json{{"mode_count", freqs.size()},
                       {"alpha1", fit.alpha1},
                       {"alpha2", fit.alpha2},
                       {"band_edges", edges_json(edges, wsl)},
                       {"warnings", warnings}});
  return 0;
}

int cmd_phase_diagram(const RunConfig& config) {
  const HybridLineSpec line = config.line();
  const double wsl = line.sl.resonance();
  const BandEdges edges = band_edges(line.sl);
  std::vector<std::string> warnings;

  std::size_t count1 = 0;
  std::size_t count2 = 0;
  const std::vector<ModeSolution> modes =
      solve_both_bands(line, config.solver, &warnings, &count1, &count2);
  const std::vector<double> freqs = sorted_frequencies(modes);

  std::vector<double> delta0_grid;
  for (double d : config.qubit.delta0_over_wsl) delta0_grid.push_back(d * wsl);
  std::sort(delta0_grid.begin(), delta0_grid.end());
  std::vector<double> g_grid;
  for (double g : config.qubit.g_grid_over_wsl()) g_grid.push_back(g * wsl);

  PhaseDiagramOptions options;
  options.jump_threshold_rel = config.solver.jump_threshold_rel;
  options.renorm = renorm_options(config.solver);
  const PhaseDiagram diagram = phase_diagram(freqs, edges, delta0_grid, g_grid, options);

  std::ofstream out = open_output(config, "phase_diagram.csv");
  out << "delta0_over_wsl,g_over_wsl,delta_eff_over_wsl,phase,converged\n";
  for (const PhaseDiagramCell& c : diagram.cells) {
    out << format_double(c.delta0 / wsl) << ',' << format_double(c.g / wsl) << ','
        << format_double(c.delta_eff / wsl) << ',' << to_string(c.phase) << ','
        << (c.converged ? 1 : 0) << '\n';
  }

  json jumps = json::array();
  for (const JumpEvent& j : diagram.jumps) {
    jumps.push_back(json{{"delta0_over_wsl", j.delta0 / wsl},
                         {"g_before_over_wsl", j.g_before / wsl},
                         {"g_after_over_wsl", j.g_after / wsl},
                         {"delta_eff_before_over_wsl", j.delta_before / wsl},
                         {"delta_eff_after_over_wsl", j.delta_after / wsl}});
  }
  write_json_file(config, "phase_diagram.json",
                  json{{"band_edges", edges_json(edges, wsl)},
                       {"jumps", jumps},
                       {"run",
                        json{{"mode_count_band1", count1},
                             {"mode_count_band2", count2},
                             {"delta0_count", diagram.delta0_count},
                             {"g_count", diagram.g_count},
                             {"jump_threshold_rel", options.jump_threshold_rel},
                             {"warnings", warnings},
                             {"config", config.to_json()}}}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sltl: left-handed superlattice / right-handed line spectra and the spin-boson "
               "phase diagram of an embedded qubit"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  GlobalArgs args;
  auto* config_opt = app.add_option("--config", args.config_path, "JSON run configuration")
                         ->check(CLI::ExistingFile);
  app.add_flag("--paper-defaults", args.paper_defaults,
               "use the built-in reference parameter set (also the default when --config is "
               "absent)")
      ->excludes(config_opt);
  app.add_option("--out", args.out_dir, "output directory (default from config)");
  app.add_option("--format", args.format, "csv or json where a choice exists")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--set", args.overrides,
                 "override a config key, e.g. --set superlattice.ratio=1.1 (repeatable)");
  app.add_flag("--seedless", args.seedless,
               "accepted for pipeline compatibility; every computation is deterministic");

  int k_points = 100;
  auto* dispersion_cmd =
      app.add_subcommand("dispersion", "Bloch dispersion of both branches as CSV");
  dispersion_cmd->add_option("--k-points", k_points, "samples per branch (default 100)")
      ->check(CLI::PositiveNumber);

  auto* band_edges_cmd =
      app.add_subcommand("band-edges", "band-edge frequencies of the superlattice");

  std::string band_arg = "both";
  auto* modes_cmd = app.add_subcommand("modes", "eigenfrequencies of the hybrid line");
  modes_cmd->add_option("--band", band_arg, "1, 2, or both (default both)")
      ->check(CLI::IsMember({"1", "2", "both"}));

  std::string profile_band = "1";
  std::string indices_arg = "50-53";
  auto* profile_cmd =
      app.add_subcommand("profile", "voltage/current node profiles of solved modes");
  profile_cmd->add_option("--band", profile_band, "band of the requested modes (default 1)")
      ->check(CLI::IsMember({"1", "2"}));
  profile_cmd->add_option("--indices", indices_arg,
                          "mode indices, e.g. 50-53 or 1,3,5 (default 50-53)");

  auto* dom_cmd =
      app.add_subcommand("dom", "density of modes: numerical, analytical, piecewise fit");
  auto* renorm_cmd = app.add_subcommand(
      "renormalize",
      "adiabatic renormalization over the configured qubit grid (discrete and continuum routes)");
  auto* phase_cmd = app.add_subcommand(
      "phase-diagram", "delta_eff and phase over the (delta0, g) grid with jump detection");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig config = build_config(args);
    if (dispersion_cmd->parsed()) return cmd_dispersion(config, k_points);
    if (band_edges_cmd->parsed()) return cmd_band_edges(config);
    if (modes_cmd->parsed()) return cmd_modes(config, band_arg);
    if (profile_cmd->parsed()) return cmd_profile(config, profile_band, indices_arg);
    if (dom_cmd->parsed()) return cmd_dom(config);
    if (renorm_cmd->parsed()) return cmd_renormalize(config);
    if (phase_cmd->parsed()) return cmd_phase_diagram(config);
    std::cout << json{{"error", "no subcommand"}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cout << json{{"error", e.what()}}.dump() << '\n';
    return 1;
  }
}
