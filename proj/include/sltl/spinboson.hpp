#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sltl/dispersion.hpp"
#include "sltl/dom.hpp"
#include "sltl/modes.hpp"

namespace sltl {

struct QubitSpec {
  double bare_tunneling = 0.0;  // Delta_0 [rad/s]
  double coupling = 0.0;        // g [rad/s], identical for every mode
};

enum class PhaseLabel {
  Delocalized,
  PartiallyLocalizedGap,
  PartiallyLocalizedBand1,
  QuasiLocalized,
};

const char* to_string(PhaseLabel label);

struct RenormalizationOptions {
  double tol_rel = 1e-10;  // stop when |Delta_n - Delta_{n-1}| <= tol_rel * Delta_0
  int max_iter = 10000;
  double floor_rel = 1e-8;  // Delta below floor_rel * Delta_0 stops as quasi-localized
};

struct RenormalizationResult {
  double delta_eff = 0.0;  // [rad/s]; underflows to 0 only for extreme couplings
  /// ln(delta_eff / delta_0), kept exactly even where delta_eff underflows
  /// double range; finite for any finite coupling and mode list.
  double log_delta_ratio = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;  // Delta_0, Delta_1, ... (non-increasing)
  int eliminated_mode_count = 0;
  PhaseLabel phase = PhaseLabel::Delocalized;
};

/// Iterated mode elimination over a sorted mode list:
///   Delta_n = Delta_0 exp(-2 sum_{omega_k > Delta_{n-1}} g^2 / omega_k^2)
/// until self-consistency, the floor, or max_iter. Modes exactly equal to
/// the running Delta are kept (strict inequality in the sum).
RenormalizationResult renormalize_discrete(std::span<const double> mode_freqs,
                                           const QubitSpec& qubit, const BandEdges& edges,
                                           const RenormalizationOptions& options = {});

/// Continuum version, Delta = Delta_0 exp(-2 int_Delta^inf J(w)/w^2 dw)
/// with J = g^2 D for a piecewise-fit DOM: the Band1 piece by adaptive
/// quadrature, the Band2 tail in closed form (the full tail from omega_2
/// integrates to pi alpha2 / (2 omega_2^{3/2})). The curve must carry band
/// edges (method PiecewiseFit).
RenormalizationResult renormalize_continuum(const DomCurve& fit, const QubitSpec& qubit,
                                            const RenormalizationOptions& options = {});

/// Coupling that renormalizes delta0 to delta_eff when delta_eff lies in
/// the band gap, g = sqrt(omega_2^{3/2} ln(delta_eff/delta0) /
/// (-pi alpha2)). Throws std::domain_error for delta_eff > delta0.
double invert_g_gap(double delta_eff, double delta0, double alpha2, double omega2);

/// Coupling for delta_eff inside the upper band (arctan closed form);
/// continuous with invert_g_gap at delta_eff = omega_2.
double invert_g_band2(double delta_eff, double delta0, double alpha2, double omega2);

/// Numerical inversion of the self-consistency relation for any delta_eff
/// (needed inside Band1 where both fit pieces contribute and no closed
/// form exists): g = sqrt(ln(delta0/delta_eff) / (2 I(delta_eff))) with
/// I evaluated by quadrature on the fit curve.
double invert_g_numeric(double delta_eff, double delta0, const DomCurve& fit);

/// Region of delta_eff relative to the band edges. Band1 is closed (ties
/// at either Band1 edge classify into the band); values below the floor or
/// below the lowest band are quasi-localized.
PhaseLabel classify_phase(double delta_eff, const BandEdges& edges, double floor);

struct PhaseDiagramCell {
  double delta0 = 0.0;
  double g = 0.0;
  double delta_eff = 0.0;
  double log_delta_ratio = 0.0;
  PhaseLabel phase = PhaseLabel::Delocalized;
  bool converged = false;
};

/// Discontinuity of delta_eff between adjacent couplings at fixed delta0.
struct JumpEvent {
  double delta0 = 0.0;
  double g_before = 0.0;
  double g_after = 0.0;
  double delta_before = 0.0;
  double delta_after = 0.0;
};

struct PhaseDiagramOptions {
  double jump_threshold_rel = 0.05;  // |delta step| / delta0 that counts as a jump
  RenormalizationOptions renorm;
};

struct PhaseDiagram {
  std::vector<PhaseDiagramCell> cells;  // row-major: delta0 outer, g inner
  std::vector<JumpEvent> jumps;
  BandEdges edges;
  std::size_t delta0_count = 0;
  std::size_t g_count = 0;

  const PhaseDiagramCell& at(std::size_t delta0_idx, std::size_t g_idx) const {
    return cells[delta0_idx * g_count + g_idx];
  }
};

/// Sweep of renormalize_discrete over (delta0, g) grids with jump
/// detection along constant-delta0 rows. Grids must be sorted ascending.
PhaseDiagram phase_diagram(std::span<const double> mode_freqs, const BandEdges& edges,
                           std::span<const double> delta0_grid, std::span<const double> g_grid,
                           const PhaseDiagramOptions& options = {});

/// Convenience overload that solves the mode list (both bands) first.
PhaseDiagram phase_diagram(const HybridLineSpec& spec, std::span<const double> delta0_grid,
                           std::span<const double> g_grid, const PhaseDiagramOptions& options = {},
                           int scan_points_per_mode = 20,
                           std::vector<std::string>* warnings = nullptr);

}  // namespace sltl
