#include "sltl/circuit.hpp"

#include <cmath>
#include <stdexcept>

namespace sltl {

namespace {

void require_positive_omega(double omega) {
  if (!(omega > 0.0)) {
    throw std::domain_error("angular frequency must be positive");
  }
}

}  // namespace

double SuperlatticeSpec::resonance() const {
  return 1.0 / std::sqrt(inductance * capacitance);
}

double SuperlatticeSpec::total_length() const {
  return static_cast<double>(supercell_count) * supercell_length;
}

double SuperlatticeSpec::nominal_impedance() const {
  return std::sqrt(inductance / capacitance);
}

void SuperlatticeSpec::validate() const {
  if (!(inductance > 0.0)) throw std::invalid_argument("superlattice inductance must be positive");
  if (!(capacitance > 0.0)) throw std::invalid_argument("superlattice capacitance must be positive");
  if (!(ratio > 0.0)) throw std::invalid_argument("superlattice cell ratio must be positive");
  if (supercell_count < 1) throw std::invalid_argument("supercell count must be at least 1");
  if (!(supercell_length > 0.0)) throw std::invalid_argument("supercell length must be positive");
}

double RightHandedSpec::inductance_per_length() const {
  return static_cast<double>(cell_count) * cell_inductance / length;
}

double RightHandedSpec::capacitance_per_length() const {
  return static_cast<double>(cell_count) * cell_capacitance / length;
}

double RightHandedSpec::resonance() const {
  return 1.0 / std::sqrt(cell_inductance * cell_capacitance);
}

double RightHandedSpec::impedance() const {
  return std::sqrt(cell_inductance / cell_capacitance);
}

double RightHandedSpec::cutoff() const { return 2.0 * resonance(); }

void RightHandedSpec::validate() const {
  if (!(cell_inductance > 0.0)) throw std::invalid_argument("right-handed cell inductance must be positive");
  if (!(cell_capacitance > 0.0)) throw std::invalid_argument("right-handed cell capacitance must be positive");
  if (cell_count < 1) throw std::invalid_argument("right-handed cell count must be at least 1");
  if (!(length > 0.0)) throw std::invalid_argument("right-handed length must be positive");
  if (!std::isfinite(impedance())) throw std::invalid_argument("right-handed impedance must be finite");
}

TwoPortMatrix operator*(const TwoPortMatrix& lhs, const TwoPortMatrix& rhs) {
  TwoPortMatrix out;
  out.b11 = lhs.b11 * rhs.b11 + lhs.b12 * rhs.b21;
  out.b12 = lhs.b11 * rhs.b12 + lhs.b12 * rhs.b22;
  out.b21 = lhs.b21 * rhs.b11 + lhs.b22 * rhs.b21;
  out.b22 = lhs.b21 * rhs.b12 + lhs.b22 * rhs.b22;
  return out;
}

TwoPortMatrix single_cell_abcd(const SuperlatticeSpec& spec, Cell cell, double omega) {
  spec.validate();
  require_positive_omega(omega);

  const double scale = cell == Cell::A ? 1.0 : spec.ratio;
  const double wsl = spec.resonance();
  const double u = (wsl / omega) * (wsl / omega);

  TwoPortMatrix b;
  b.b11 = 1.0 - u / (scale * scale);
  // 1/(i x) = -i/x for the series-C impedance and shunt-L admittance
  b.b12 = Complex(0.0, -1.0 / (omega * scale * spec.capacitance));
  b.b21 = Complex(0.0, -1.0 / (omega * scale * spec.inductance));
  b.b22 = 1.0;
  return b;
}

TwoPortMatrix supercell_abcd(const SuperlatticeSpec& spec, double omega) {
  spec.validate();
  require_positive_omega(omega);

  const double e = spec.ratio;
  const double wsl = spec.resonance();
  const double u = (wsl / omega) * (wsl / omega);

  TwoPortMatrix b;
  b.b11 = 1.0 - u * (1.0 + 1.0 / e + 1.0 / (e * e) - u / (e * e));
  b.b12 = Complex(0.0, -1.0 / (omega * spec.capacitance)) * (1.0 + 1.0 / e - u / e);
  b.b21 = Complex(0.0, -1.0 / (omega * spec.inductance)) * (1.0 + 1.0 / e - u / (e * e));
  b.b22 = 1.0 - u / e;
  return b;
}

}  // namespace sltl
