#include "sltl/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sltl {

namespace {

constexpr double kPi = std::numbers::pi;

// Slack on the k dz in [0, pi] precondition so that grid endpoints built
// from pi/dz divisions are not rejected over the last ulp.
constexpr double kPhaseSlack = 1e-12;

double reduced_phase(const SuperlatticeSpec& spec, double k) {
  const double x = k * spec.supercell_length;
  if (x < -kPhaseSlack || x > kPi * (1.0 + kPhaseSlack)) {
    throw std::domain_error("superlattice wave number outside [0, pi/dz]");
  }
  return std::clamp(x, 0.0, kPi);
}

}  // namespace

double rh_dispersion_discrete(const RightHandedSpec& spec, double k) {
  spec.validate();
  const double k_max = kPi * static_cast<double>(spec.cell_count) / spec.length;
  if (k < -kPhaseSlack * k_max || k > k_max * (1.0 + kPhaseSlack)) {
    throw std::domain_error("right-handed wave number outside [0, pi n_r / d_r]");
  }
  const double arg = std::clamp(k, 0.0, k_max) * spec.length /
                     (2.0 * static_cast<double>(spec.cell_count));
  return spec.cutoff() * std::sin(arg);
}

double rh_dispersion_continuum(const RightHandedSpec& spec, double k) {
  spec.validate();
  if (k < 0.0) throw std::domain_error("right-handed wave number must be non-negative");
  return k / std::sqrt(spec.capacitance_per_length() * spec.inductance_per_length());
}

double rh_wavenumber_continuum(const RightHandedSpec& spec, double omega) {
  spec.validate();
  if (omega < 0.0) throw std::domain_error("angular frequency must be non-negative");
  return omega * std::sqrt(spec.capacitance_per_length() * spec.inductance_per_length());
}

std::optional<double> sl_dispersion(const SuperlatticeSpec& spec, double k, Branch branch) {
  spec.validate();
  const double x = reduced_phase(spec, k);
  const double e = spec.ratio;
  const double a = 0.5 * (1.0 + e) * (1.0 + e);

  // 2 - 2 cos(x) written through sin(x/2) so the Upper branch stays
  // accurate down to k dz ~ 1e-8.
  const double half_sin = std::sin(0.5 * x);
  const double two_minus_two_cos = 4.0 * half_sin * half_sin;
  const double inner = std::sqrt(std::max(0.0, a * a - e * e * two_minus_two_cos));

  double u;  // (omega_sl / omega)^2
  if (branch == Branch::Lower) {
    u = a + inner;
  } else {
    // a - inner evaluated as (a^2 - inner^2)/(a + inner); exact zero at k = 0
    u = e * e * two_minus_two_cos / (a + inner);
  }
  if (u <= 0.0) return std::nullopt;
  return spec.resonance() / std::sqrt(u);
}

BandEdges band_edges(double omega_sl, double ratio) {
  if (!(omega_sl > 0.0)) throw std::invalid_argument("omega_sl must be positive");
  if (!(ratio > 0.0)) throw std::invalid_argument("cell ratio must be positive");
  const double e = ratio;
  const double a = 0.5 * (1.0 + e) * (1.0 + e);
  // sqrt(a^2 - 4 e^2) factored as |1 - e| sqrt((1+e)^2 + 4 e)/2: stable and
  // exactly zero at e = 1, so the gap closes identically there.
  const double inner = 0.5 * std::abs(1.0 - e) * std::sqrt((1.0 + e) * (1.0 + e) + 4.0 * e);

  BandEdges edges;
  edges.lower_min = omega_sl / (1.0 + e);
  edges.lower_max = omega_sl / std::sqrt(a + inner);
  edges.upper_min = omega_sl / std::sqrt(a - inner);
  return edges;
}

BandEdges band_edges(const SuperlatticeSpec& spec) {
  spec.validate();
  return band_edges(spec.resonance(), spec.ratio);
}

std::vector<std::pair<double, double>> bandwidth_curve(double omega_sl,
                                                       std::span<const double> ratios) {
  std::vector<std::pair<double, double>> out;
  out.reserve(ratios.size());
  for (double e : ratios) {
    out.emplace_back(e, band_edges(omega_sl, e).band1_width());
  }
  return out;
}

std::optional<Branch> sl_band_of(const SuperlatticeSpec& spec, double omega) {
  const BandEdges edges = band_edges(spec);
  if (omega >= edges.lower_min && omega <= edges.lower_max) return Branch::Lower;
  if (omega >= edges.upper_min) return Branch::Upper;
  return std::nullopt;
}

double sl_wavenumber(const SuperlatticeSpec& spec, double omega) {
  const TwoPortMatrix b = supercell_abcd(spec, omega);
  const double c = 0.5 * b.trace().real();
  if (std::abs(c) > 1.0 + 1e-12) {
    throw std::domain_error("frequency lies in a spectral gap of the superlattice");
  }
  return std::acos(std::clamp(c, -1.0, 1.0)) / spec.supercell_length;
}

std::optional<double> el_oracle_dispersion(const SuperlatticeSpec& spec, double k, Branch branch) {
  spec.validate();
  const double x = reduced_phase(spec, k);
  if (x <= 0.0) throw std::domain_error("Euler-Lagrange route requires k dz in (0, pi]");
  const double e = spec.ratio;

  // Plane waves on the even sublattice turn the flux equation into a
  // quadratic for u = omega_sl^2/omega^2:
  //   ((1+e) - u)((1+e) - u/e) = 1 + e^2 + 2 e cos(k dz)
  const double qa = 1.0 / e;
  const double qb = -(1.0 + e) * (1.0 + 1.0 / e);
  const double qc = (1.0 + e) * (1.0 + e) - (1.0 + e * e) - 2.0 * e * std::cos(x);

  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) {
    throw std::runtime_error("even-site lattice equation has no real root");
  }
  // qb < 0 always, so the stable split is q = (-qb + sqrt(disc))/2.
  const double q = 0.5 * (-qb + std::sqrt(disc));
  const double u = branch == Branch::Lower ? q / qa : qc / q;
  if (u <= 0.0) return std::nullopt;
  return spec.resonance() / std::sqrt(u);
}

}  // namespace sltl
