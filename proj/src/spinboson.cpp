#include "sltl/spinboson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sltl {

namespace {

constexpr double kPi = std::numbers::pi;

void require_sorted_positive(std::span<const double> freqs) {
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (!(freqs[i] > 0.0)) throw std::invalid_argument("mode frequencies must be positive");
    if (i > 0 && freqs[i] < freqs[i - 1]) {
      throw std::invalid_argument("mode frequencies must be sorted ascending");
    }
  }
}

void check_inputs(const QubitSpec& qubit, const RenormalizationOptions& options) {
  if (!(qubit.bare_tunneling > 0.0)) throw std::invalid_argument("bare tunneling must be positive");
  if (qubit.coupling < 0.0) throw std::invalid_argument("coupling must be non-negative");
  if (!(options.tol_rel > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (!(options.floor_rel > 0.0)) throw std::invalid_argument("localization floor must be positive");
}

template <typename SumFn>
RenormalizationResult iterate_fixed_point(SumFn&& weighted_sum, const QubitSpec& qubit,
                                          const RenormalizationOptions& options) {
  const double delta0 = qubit.bare_tunneling;
  const double g = qubit.coupling;
  const double floor = options.floor_rel * delta0;

  RenormalizationResult result;
  result.trace.push_back(delta0);

  double delta_prev = delta0;
  for (int it = 1; it <= options.max_iter; ++it) {
    const double log_next = -2.0 * (g * g) * weighted_sum(delta_prev);
    const double delta = delta0 * std::exp(log_next);
    result.trace.push_back(delta);
    result.iterations = it;
    result.log_delta_ratio = log_next;
    if (delta < floor) {
      result.converged = true;
      delta_prev = delta;
      break;
    }
    if (std::abs(delta - delta_prev) <= options.tol_rel * delta0) {
      result.converged = true;
      delta_prev = delta;
      break;
    }
    delta_prev = delta;
  }
  result.delta_eff = result.trace.back();
  return result;
}

// Adaptive Simpson with a fixed absolute tolerance budget.
template <typename F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double rel_tol) {
  if (!(b > a)) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double tol = std::abs(whole) * rel_tol + 1e-300;
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// int_{max(lo, omega_2)}^inf domega / (omega^2 sqrt(omega - omega_2));
// the full tail (lo <= omega_2) is pi / (2 omega_2^{3/2}).
double band2_tail_integral(double lo, double omega2) {
  const double x = std::max(lo, omega2);
  const double t0 = std::sqrt(std::max(0.0, x - omega2));
  const double rt = std::sqrt(omega2);
  return kPi / (2.0 * omega2 * rt) - t0 / (omega2 * (t0 * t0 + omega2)) -
         std::atan(t0 / rt) / (omega2 * rt);
}

// int_{max(lo, omega_1-)}^{omega_1+} domega / (omega^2 sqrt(omega - a) (b - omega)^{1/4}).
// Substitutions t = sqrt(omega - a) and s = (b - omega)^{1/4} remove the
// endpoint singularities before the adaptive pass.
double band1_kernel_integral(double lo, const BandEdges& edges) {
  const double a = edges.lower_min;
  const double b = edges.lower_max;
  if (!(b > a)) return 0.0;
  const double start = std::max(lo, a);
  if (start >= b) return 0.0;
  const double mid = 0.5 * (start + b);

  const auto left = [&](double t) {
    const double w = a + t * t;
    return 2.0 / (w * w * std::pow(b - w, 0.25));
  };
  const auto right = [&](double s) {
    const double s2 = s * s;
    const double w = b - s2 * s2;
    return 4.0 * s2 / (w * w * std::sqrt(w - a));
  };

  double total = adaptive_simpson(left, std::sqrt(start - a), std::sqrt(mid - a), 1e-12);
  total += adaptive_simpson(right, 0.0, std::pow(b - mid, 0.25), 1e-12);
  return total;
}

// int_delta^inf D(omega)/omega^2 domega for the piecewise-fit DOM.
double fit_weighted_sum(const DomCurve& fit, double delta) {
  const BandEdges& edges = *fit.edges;
  double total = fit.alpha2 * band2_tail_integral(delta, edges.upper_min);
  if (delta < edges.lower_max) {
    total += fit.alpha1 * band1_kernel_integral(delta, edges);
  }
  return total;
}

}  // namespace

const char* to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::Delocalized: return "delocalized";
    case PhaseLabel::PartiallyLocalizedGap: return "partially_localized_gap";
    case PhaseLabel::PartiallyLocalizedBand1: return "partially_localized_band1";
    case PhaseLabel::QuasiLocalized: return "quasi_localized";
  }
  return "unknown";
}

RenormalizationResult renormalize_discrete(std::span<const double> mode_freqs,
                                           const QubitSpec& qubit, const BandEdges& edges,
                                           const RenormalizationOptions& options) {
  check_inputs(qubit, options);
  require_sorted_positive(mode_freqs);

  // suffix[i] = sum_{k >= i} 1/omega_k^2, accumulated from the top so the
  // smallest terms are added first.
  const std::size_t n = mode_freqs.size();
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    suffix[i] = suffix[i + 1] + 1.0 / (mode_freqs[i] * mode_freqs[i]);
  }

  const auto weighted_sum = [&](double delta) {
    const std::size_t idx =
        std::upper_bound(mode_freqs.begin(), mode_freqs.end(), delta) - mode_freqs.begin();
    return suffix[idx];
  };

  RenormalizationResult result = iterate_fixed_point(weighted_sum, qubit, options);
  result.eliminated_mode_count = static_cast<int>(
      n - (std::upper_bound(mode_freqs.begin(), mode_freqs.end(), result.delta_eff) -
           mode_freqs.begin()));
  result.phase = classify_phase(result.delta_eff, edges, options.floor_rel * qubit.bare_tunneling);
  return result;
}

RenormalizationResult renormalize_continuum(const DomCurve& fit, const QubitSpec& qubit,
                                            const RenormalizationOptions& options) {
  check_inputs(qubit, options);
  if (fit.method != DomMethod::PiecewiseFit || !fit.edges) {
    throw std::invalid_argument("continuum renormalization needs a piecewise-fit DOM with edges");
  }
  if (fit.alpha1 < 0.0 || fit.alpha2 < 0.0) {
    throw std::invalid_argument("fit amplitudes must be non-negative");
  }

  const auto weighted_sum = [&](double delta) { return fit_weighted_sum(fit, delta); };
  RenormalizationResult result = iterate_fixed_point(weighted_sum, qubit, options);
  result.phase = classify_phase(result.delta_eff, *fit.edges,
                                options.floor_rel * qubit.bare_tunneling);
  return result;
}

double invert_g_gap(double delta_eff, double delta0, double alpha2, double omega2) {
  if (!(delta0 > 0.0) || !(delta_eff > 0.0)) {
    throw std::domain_error("tunneling rates must be positive");
  }
  if (!(alpha2 > 0.0) || !(omega2 > 0.0)) {
    throw std::domain_error("fit amplitude and band edge must be positive");
  }
  if (delta_eff > delta0) {
    throw std::domain_error("delta_eff above delta0: negative radicand");
  }
  const double num = omega2 * std::sqrt(omega2) * std::log(delta_eff / delta0);
  return std::sqrt(std::max(0.0, num / (-kPi * alpha2)));
}

double invert_g_band2(double delta_eff, double delta0, double alpha2, double omega2) {
  if (!(delta0 > 0.0) || !(alpha2 > 0.0) || !(omega2 > 0.0)) {
    throw std::domain_error("parameters must be positive");
  }
  if (delta_eff < omega2 * (1.0 - 1e-12)) {
    throw std::domain_error("delta_eff below the upper band edge");
  }
  if (delta_eff > delta0) {
    throw std::domain_error("delta_eff above delta0: negative radicand");
  }
  const double s = std::sqrt(std::max(0.0, delta_eff / omega2 - 1.0));
  const double bracket = (omega2 / delta_eff) * s + std::atan(s) - 0.5 * kPi;
  const double num = omega2 * std::sqrt(omega2) * std::log(delta_eff / delta0);
  return std::sqrt(std::max(0.0, num / (2.0 * alpha2 * bracket)));
}

double invert_g_numeric(double delta_eff, double delta0, const DomCurve& fit) {
  if (fit.method != DomMethod::PiecewiseFit || !fit.edges) {
    throw std::invalid_argument("numeric inversion needs a piecewise-fit DOM with edges");
  }
  if (!(delta0 > 0.0) || !(delta_eff > 0.0)) {
    throw std::domain_error("tunneling rates must be positive");
  }
  if (delta_eff > delta0) {
    throw std::domain_error("delta_eff above delta0: negative radicand");
  }
  const double integral = fit_weighted_sum(fit, delta_eff);
  if (integral <= 0.0) {
    if (delta_eff == delta0) return 0.0;
    throw std::domain_error("self-consistency integral vanishes above delta_eff");
  }
  return std::sqrt(std::log(delta0 / delta_eff) / (2.0 * integral));
}

PhaseLabel classify_phase(double delta_eff, const BandEdges& edges, double floor) {
  if (!(floor > 0.0)) throw std::invalid_argument("localization floor must be positive");
  if (delta_eff < floor) return PhaseLabel::QuasiLocalized;
  if (delta_eff >= edges.upper_min) return PhaseLabel::Delocalized;
  if (delta_eff > edges.lower_max) return PhaseLabel::PartiallyLocalizedGap;
  if (delta_eff >= edges.lower_min) return PhaseLabel::PartiallyLocalizedBand1;
  return PhaseLabel::QuasiLocalized;  // below the lowest mode, nothing left to eliminate
}

PhaseDiagram phase_diagram(std::span<const double> mode_freqs, const BandEdges& edges,
                           std::span<const double> delta0_grid, std::span<const double> g_grid,
                           const PhaseDiagramOptions& options) {
  if (delta0_grid.empty() || g_grid.empty()) {
    throw std::invalid_argument("phase diagram grids must be non-empty");
  }
  if (!std::is_sorted(delta0_grid.begin(), delta0_grid.end()) ||
      !std::is_sorted(g_grid.begin(), g_grid.end())) {
    throw std::invalid_argument("phase diagram grids must be sorted ascending");
  }

  PhaseDiagram diagram;
  diagram.edges = edges;
  diagram.delta0_count = delta0_grid.size();
  diagram.g_count = g_grid.size();
  diagram.cells.reserve(delta0_grid.size() * g_grid.size());

  for (double delta0 : delta0_grid) {
    for (std::size_t j = 0; j < g_grid.size(); ++j) {
      const QubitSpec qubit{delta0, g_grid[j]};
      const RenormalizationResult r =
          renormalize_discrete(mode_freqs, qubit, edges, options.renorm);
      diagram.cells.push_back(
          {delta0, g_grid[j], r.delta_eff, r.log_delta_ratio, r.phase, r.converged});
      if (j > 0) {
        const PhaseDiagramCell& prev = diagram.cells[diagram.cells.size() - 2];
        if (std::abs(r.delta_eff - prev.delta_eff) > options.jump_threshold_rel * delta0) {
          diagram.jumps.push_back(
              {delta0, prev.g, g_grid[j], prev.delta_eff, r.delta_eff});
        }
      }
    }
  }
  return diagram;
}

PhaseDiagram phase_diagram(const HybridLineSpec& spec, std::span<const double> delta0_grid,
                           std::span<const double> g_grid, const PhaseDiagramOptions& options,
                           int scan_points_per_mode, std::vector<std::string>* warnings) {
  spec.validate();
  FindModesOptions find_options;
  find_options.warnings = warnings;
  const int scan_points = scan_points_per_mode * spec.sl.supercell_count;

  std::vector<double> freqs;
  for (Band band : {Band::Band1, Band::Band2}) {
    for (const ModeSolution& m : find_modes(spec, band, scan_points, find_options)) {
      freqs.push_back(m.omega);
    }
  }
  std::sort(freqs.begin(), freqs.end());
  return phase_diagram(freqs, band_edges(spec.sl), delta0_grid, g_grid, options);
}

}  // namespace sltl
