#include "sltl/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace sltl {

namespace {

constexpr double kPi = std::numbers::pi;

struct Matching {
  double k_sl = 0.0;
  double k_r = 0.0;
  Complex beta;
  Complex z_sl;
  double alpha = 0.0;
  double sin_ksl_dsl = 0.0;
  double sin_kr_dr = 0.0;
  double cos_kr_dr = 0.0;
  Complex sl_term;  // Z_sl (e^{i k_sl d_sl} + beta e^{-i k_sl d_sl})
  double z_r = 0.0;
};

// Everything entering the junction matching condition at one frequency.
Matching matching_at(const HybridLineSpec& spec, double omega) {
  Matching m;
  m.k_sl = sl_wavenumber(spec.sl, omega);
  m.k_r = rh_wavenumber_continuum(spec.rh, omega);

  const TwoPortMatrix b = supercell_abcd(spec.sl, omega);
  const Complex cell_phase = std::polar(1.0, m.k_sl * spec.sl.supercell_length);
  const Complex w = cell_phase - b.b22;
  m.beta = -(std::conj(cell_phase) - b.b22) / w;
  m.z_sl = w / b.b21;

  const double d_sl = spec.sl.total_length();
  const double d_r = spec.rh.length;
  m.sin_ksl_dsl = std::sin(m.k_sl * d_sl);
  m.sin_kr_dr = std::sin(m.k_r * d_r);
  m.cos_kr_dr = std::cos(m.k_r * d_r);
  m.alpha = -m.sin_ksl_dsl / m.sin_kr_dr;

  const Complex line_phase = std::polar(1.0, m.k_sl * d_sl);
  m.sl_term = m.z_sl * (line_phase + m.beta * std::conj(line_phase));
  m.z_r = spec.rh.impedance();
  return m;
}

void check_residual_domain(const HybridLineSpec& spec, double omega) {
  if (!(omega < spec.rh.cutoff())) {
    throw std::domain_error("frequency at or above the right-handed cutoff");
  }
  if (!sl_band_of(spec.sl, omega)) {
    throw std::domain_error("frequency in the superlattice gap or below the lowest band");
  }
}

// Residual multiplied by sin(k_r d_r). Same zeros, but finite across the
// right-handed resonances where alpha has poles, so sign scanning cannot
// pick up a pole crossing as a root.
double scan_value(const HybridLineSpec& spec, double omega) {
  const Matching m = matching_at(spec, omega);
  return 2.0 * m.z_r * (-m.sin_ksl_dsl) * m.cos_kr_dr - m.sin_kr_dr * m.sl_term.real();
}

double bisect_mode(const HybridLineSpec& spec, double lo, double hi, double f_lo,
                   double tol_rel) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // collapsed to adjacent doubles
    if (tol_rel > 0.0 && (hi - lo) <= tol_rel * mid) break;
    const double f = scan_value(spec, mid);
    if (f == 0.0) return mid;
    if ((f < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ModeSolution make_mode(const HybridLineSpec& spec, Band band, int index, double omega) {
  const Matching m = matching_at(spec, omega);
  ModeSolution s;
  s.index = index;
  s.band = band;
  s.omega = omega;
  s.k_sl = m.k_sl;
  s.k_r = m.k_r;
  s.alpha = m.alpha;
  s.beta = m.beta;
  s.z_sl = m.z_sl;
  return s;
}

}  // namespace

void HybridLineSpec::validate() const {
  sl.validate();
  rh.validate();
}

double self_consistency_residual(const HybridLineSpec& spec, double omega) {
  spec.validate();
  check_residual_domain(spec, omega);
  const Matching m = matching_at(spec, omega);
  return 2.0 * m.z_r * m.alpha * m.cos_kr_dr - m.sl_term.real();
}

double self_consistency_scale(const HybridLineSpec& spec, double omega) {
  spec.validate();
  check_residual_domain(spec, omega);
  const Matching m = matching_at(spec, omega);
  return std::abs(2.0 * m.z_r * m.alpha * m.cos_kr_dr) +
         std::abs(m.z_sl) * (1.0 + std::abs(m.beta));
}

std::vector<ModeSolution> find_modes(const HybridLineSpec& spec, Band band, int scan_points,
                                     const FindModesOptions& options) {
  spec.validate();
  if (scan_points < 2) throw std::invalid_argument("scan_points must be at least 2");

  auto warn = [&](std::string msg) {
    if (options.warnings) options.warnings->push_back(std::move(msg));
  };
  if (scan_points < 10 * spec.sl.supercell_count) {
    warn("scan density below 10 points per expected mode (" + std::to_string(scan_points) +
         " points for ~" + std::to_string(spec.sl.supercell_count) +
         " modes); close roots may be missed");
  }

  const BandEdges edges = band_edges(spec.sl);
  const double k_edge = kPi / spec.sl.supercell_length;
  const double cap = spec.rh.cutoff();
  Branch branch = Branch::Lower;
  double k_lo = 0.0;
  double k_hi = k_edge;
  bool ascending_in_k = true;

  if (band == Band::Band1) {
    if (cap <= edges.lower_min) {
      warn("right-handed cutoff at or below the lower band edge: empty Band1 window");
      return {};
    }
    if (cap < edges.lower_max) {
      // unusual but legal: a slow right-handed line caps the band scan
      k_hi = sl_wavenumber(spec.sl, cap);
    }
  } else {
    branch = Branch::Upper;
    ascending_in_k = false;
    if (cap <= edges.upper_min) {
      warn("right-handed cutoff at or below the upper band edge: empty Band2 window");
      return {};
    }
    k_lo = sl_wavenumber(spec.sl, cap);
  }

  // Midpoint grid, uniform in k: modes sit nearly uniformly in k, so this
  // keeps the sampling density per mode flat through the Van Hove edges.
  // The half-step margins leave the exact band edges out of the scan.
  const double h = (k_hi - k_lo) / static_cast<double>(scan_points);
  std::vector<double> grid(scan_points);
  for (int j = 0; j < scan_points; ++j) {
    const double offset = (static_cast<double>(j) + 0.5) * h;
    const double k = ascending_in_k ? k_lo + offset : k_hi - offset;
    grid[j] = sl_dispersion(spec.sl, k, branch).value();
  }

  std::vector<ModeSolution> out;
  double f_prev = scan_value(spec, grid[0]);
  int last_bracket = -10;
  for (int j = 1; j < scan_points; ++j) {
    const double f = scan_value(spec, grid[j]);
    if (f_prev == 0.0) {
      out.push_back(make_mode(spec, band, 0, grid[j - 1]));
    } else if (f_prev * f < 0.0) {
      if (j - 1 == last_bracket + 1) {
        warn("adjacent scan cells each bracket a root near omega = " + std::to_string(grid[j]) +
             " rad/s (scan step " + std::to_string(grid[j] - grid[j - 1]) +
             " rad/s); a close pair may have been missed at this density");
      }
      last_bracket = j - 1;
      out.push_back(make_mode(spec, band, 0,
                              bisect_mode(spec, grid[j - 1], grid[j], f_prev, options.root_tol_rel)));
    }
    f_prev = f;
  }

  for (std::size_t i = 0; i < out.size(); ++i) out[i].index = static_cast<int>(i) + 1;
  return out;
}

ModeProfile mode_profile(const HybridLineSpec& spec, const ModeSolution& mode, int rh_samples) {
  spec.validate();
  if (rh_samples < 2) throw std::invalid_argument("rh_samples must be at least 2");

  double k_check = 0.0;
  try {
    k_check = sl_wavenumber(spec.sl, mode.omega);
  } catch (const std::domain_error&) {
    throw std::invalid_argument("mode frequency outside the bands of this line spec");
  }
  const double k_r_check = rh_wavenumber_continuum(spec.rh, mode.omega);
  if (std::abs(k_check - mode.k_sl) > 1e-6 * k_check ||
      std::abs(k_r_check - mode.k_r) > 1e-6 * k_r_check) {
    throw std::invalid_argument("mode does not belong to this line spec");
  }

  const double d_sl = spec.sl.total_length();
  const double d = spec.total_length();
  const double z_r = spec.rh.impedance();
  const double half_cell = 0.5 * spec.sl.supercell_length;
  const int node_count = 2 * spec.sl.supercell_count + 1;

  ModeProfile profile;
  profile.samples.reserve(static_cast<std::size_t>(node_count) + rh_samples);

  for (int n = 0; n < node_count; ++n) {
    const double z = static_cast<double>(n) * half_cell;
    const Complex phase = std::polar(1.0, mode.k_sl * z);
    ModeProfile::Sample s;
    s.z = z;
    s.current = Complex(0.0, 2.0 * std::sin(mode.k_sl * z));  // e^{ikz} - e^{-ikz}
    s.voltage = mode.z_sl * (phase + mode.beta * std::conj(phase));
    s.superlattice = true;
    profile.samples.push_back(s);
  }

  const double step = spec.rh.length / static_cast<double>(rh_samples - 1);
  for (int j = 0; j < rh_samples; ++j) {
    const double z = d_sl + static_cast<double>(j) * step;
    const double phase = mode.k_r * (z - d);  // vanishes at the open output end
    ModeProfile::Sample s;
    s.z = z;
    s.current = Complex(0.0, 2.0 * mode.alpha * std::sin(phase));
    s.voltage = Complex(2.0 * z_r * mode.alpha * std::cos(phase), 0.0);
    s.superlattice = false;
    profile.samples.push_back(s);
  }
  return profile;
}

}  // namespace sltl
