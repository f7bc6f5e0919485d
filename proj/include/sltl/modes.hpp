#pragma once

#include <string>
#include <vector>

#include "sltl/circuit.hpp"
#include "sltl/dispersion.hpp"

namespace sltl {

/// Superlattice section coupled to a right-handed section, open at both
/// ends (current nodes at z = 0 and z = d_sl + d_r).
struct HybridLineSpec {
  SuperlatticeSpec sl;
  RightHandedSpec rh;

  double total_length() const { return sl.total_length() + rh.length; }
  void validate() const;
};

enum class Band { Band1, Band2 };

/// One eigenmode of the finite hybrid line. Amplitudes use the free
/// normalization I_0 = 1 A at the superlattice input.
struct ModeSolution {
  int index = 0;  // 1-based, ascending in omega within the band
  Band band = Band::Band1;
  double omega = 0.0;  // [rad/s]
  double k_sl = 0.0;   // superlattice wave number [rad/m]
  double k_r = 0.0;    // right-handed wave number [rad/m]
  double alpha = 0.0;  // current amplitude ratio, -sin(k_sl d_sl)/sin(k_r d_r)
  Complex beta;        // superlattice reflection coefficient, |beta| = 1
  Complex z_sl;        // superlattice wave impedance at omega [ohm]
};

/// Voltage/current samples along the line. Superlattice values exist only
/// at circuit nodes (spacing dz/2); the right-handed section is sampled on
/// a uniform grid.
struct ModeProfile {
  struct Sample {
    double z = 0.0;  // [m]
    Complex voltage; // [V]
    Complex current; // [A]
    bool superlattice = false;
  };
  std::vector<Sample> samples;
};

/// Real-valued mismatch of the voltage-continuity condition at the
/// junction, 2 Z_r alpha cos(k_r d_r) - Z_sl (e^{i k_sl d_sl} + beta
/// e^{-i k_sl d_sl}); eigenfrequencies are its zeros. Requires omega
/// inside a superlattice band and below the right-handed cutoff, else
/// std::domain_error. Diverges at right-handed resonances
/// (sin(k_r d_r) = 0), which are not eigenfrequencies.
double self_consistency_residual(const HybridLineSpec& spec, double omega);

/// Magnitude scale of the residual terms at omega, for relative zero tests.
double self_consistency_scale(const HybridLineSpec& spec, double omega);

struct FindModesOptions {
  /// Bisection width target relative to omega; 0 refines to machine
  /// precision (the residual at the root then sits at its rounding floor).
  double root_tol_rel = 0.0;
  std::vector<std::string>* warnings = nullptr;
};

/// All eigenfrequencies in the requested band, bracketed on a scan grid
/// uniform in the superlattice wave number (mode spacing is nearly uniform
/// in k, so this keeps the per-mode sampling density flat through the Van
/// Hove clustering at the band edges) and refined by bisection. Band2 is
/// scanned up to the right-handed cutoff. Results are sorted ascending
/// with contiguous 1-based indices.
std::vector<ModeSolution> find_modes(const HybridLineSpec& spec, Band band, int scan_points,
                                     const FindModesOptions& options = {});

/// Node samples of the wave equations for a solved mode. The superlattice
/// is sampled at every circuit node (dz/2 spacing, including both cells of
/// each supercell); the right-handed section on rh_samples uniform points
/// starting at the junction. Throws std::invalid_argument when the mode
/// does not belong to this spec.
ModeProfile mode_profile(const HybridLineSpec& spec, const ModeSolution& mode,
                         int rh_samples = 201);

}  // namespace sltl
