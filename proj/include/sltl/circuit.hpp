#pragma once

#include <complex>

namespace sltl {

using Complex = std::complex<double>;

/// Electrical parameters of the two-cell left-handed superlattice.
///
/// The unit cell (supercell) is a pair of series-C / shunt-L cells. The
/// second cell is tied to the first through the ratio `ratio` (eps):
/// L' = eps * L, C' = eps * C, so both cells share the characteristic
/// impedance sqrt(L/C) and no reflections occur between them. All values
/// are SI.
struct SuperlatticeSpec {
  double inductance = 0.0;        // L_sl [H], shunt inductor of the first cell
  double capacitance = 0.0;       // C_sl [F], series capacitor of the first cell
  double ratio = 1.0;             // eps, second-cell scale factor
  int supercell_count = 1;        // n_sl
  double supercell_length = 0.0;  // dz [m], length of one two-cell supercell

  double resonance() const;          // omega_sl = 1/sqrt(L C) [rad/s]
  double total_length() const;       // d_sl = n_sl * dz [m]
  double nominal_impedance() const;  // sqrt(L/C) [ohm]

  /// Throws std::invalid_argument on non-physical parameters.
  void validate() const;
};

/// Discrete LC ladder model of the right-handed line section (series L,
/// shunt C), plus the derived per-unit-length continuum parameters.
struct RightHandedSpec {
  double cell_inductance = 0.0;   // series inductor per cell [H]
  double cell_capacitance = 0.0;  // shunt capacitor per cell [F]
  int cell_count = 1;             // n_r
  double length = 0.0;            // d_r [m]

  double inductance_per_length() const;   // l_r = n_r L / d_r [H/m]
  double capacitance_per_length() const;  // c_r = n_r C / d_r [F/m]
  double resonance() const;               // omega_r = 1/sqrt(L C) [rad/s]
  double impedance() const;               // Z_r = sqrt(L/C) [ohm]
  double cutoff() const;                  // 2 * omega_r, top of the discrete passband [rad/s]

  void validate() const;
};

enum class Cell { A, B };

/// ABCD transfer matrix of a lossless two-port,
/// (V_out, I_out)^T = b (V_in, I_in)^T.
/// b12 carries ohms, b21 siemens, b11/b22 are dimensionless. Reciprocity
/// of the reactive cells implies det = 1.
struct TwoPortMatrix {
  Complex b11, b12, b21, b22;

  Complex determinant() const { return b11 * b22 - b12 * b21; }
  Complex trace() const { return b11 + b22; }
};

/// Cascade: the matrix of two sections in series.
TwoPortMatrix operator*(const TwoPortMatrix& lhs, const TwoPortMatrix& rhs);

/// ABCD matrix of one LH cell at angular frequency omega.
/// Throws std::domain_error for omega <= 0.
TwoPortMatrix single_cell_abcd(const SuperlatticeSpec& spec, Cell cell, double omega);

/// ABCD matrix of the full two-cell supercell in closed form. Equals
/// single_cell_abcd(A) * single_cell_abcd(B) entry by entry.
TwoPortMatrix supercell_abcd(const SuperlatticeSpec& spec, double omega);

}  // namespace sltl
