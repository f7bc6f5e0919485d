#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sltl/circuit.hpp"

namespace sltl {

/// Band limits of the infinite superlattice: the spectrum is
/// [lower_min, lower_max] U [upper_min, inf).
struct BandEdges {
  double lower_min = 0.0;  // omega_1- [rad/s]
  double lower_max = 0.0;  // omega_1+ [rad/s]
  double upper_min = 0.0;  // omega_2 [rad/s]

  double gap_width() const { return upper_min - lower_max; }
  double band1_width() const { return lower_max - lower_min; }
};

/// Branch selector for the two-band dispersion. Lower takes the plus sign
/// in front of the inner square root and spans [omega_1-, omega_1+];
/// Upper takes the minus sign and spans [omega_2, inf) with frequency
/// falling as k grows (left-handed).
enum class Branch { Lower, Upper };

/// Discrete right-handed dispersion, omega = 2 omega_r sin(k d_r / (2 n_r)).
/// Valid for k in [0, pi n_r / d_r]; throws std::domain_error outside.
double rh_dispersion_discrete(const RightHandedSpec& spec, double k);

/// Continuum limit of the right-handed line, omega = k / sqrt(c_r l_r).
double rh_dispersion_continuum(const RightHandedSpec& spec, double k);

/// Inverse of the continuum dispersion, k = omega sqrt(c_r l_r).
double rh_wavenumber_continuum(const RightHandedSpec& spec, double omega);

/// Bloch dispersion of the superlattice for k dz in [0, pi]. Returns
/// nullopt only for the Upper branch at k == 0, where the branch is
/// unbounded; every other input yields a finite frequency.
std::optional<double> sl_dispersion(const SuperlatticeSpec& spec, double k, Branch branch);

BandEdges band_edges(double omega_sl, double ratio);
BandEdges band_edges(const SuperlatticeSpec& spec);

/// (ratio, band1 width) pairs; the width is maximal at ratio = 1.
std::vector<std::pair<double, double>> bandwidth_curve(double omega_sl,
                                                       std::span<const double> ratios);

/// Which band omega falls in (closed intervals), or nullopt in the gap /
/// below the lowest band.
std::optional<Branch> sl_band_of(const SuperlatticeSpec& spec, double omega);

/// Inverse dispersion via the supercell trace, 2 cos(k dz) = b11 + b22,
/// choosing k dz in [0, pi]. Throws std::domain_error when omega lies in
/// the gap or below the lowest band.
double sl_wavenumber(const SuperlatticeSpec& spec, double omega);

/// Dispersion recomputed from the Euler-Lagrange equation of the even
/// lattice sites (quadratic in omega_sl^2/omega^2), an independent route
/// to the same spectrum. Requires k dz in (0, pi]; nullopt tags the
/// unbounded Upper limit, std::runtime_error reports a complex root pair
/// (an inconsistency signal, impossible for physical parameters).
std::optional<double> el_oracle_dispersion(const SuperlatticeSpec& spec, double k, Branch branch);

}  // namespace sltl
