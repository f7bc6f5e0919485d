#include "sltl/dom.hpp"

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

void append_band(std::span<const double> freqs, Band band, std::vector<DomSample>& out,
                 std::vector<std::string>* warnings) {
  if (freqs.size() < 3) {
    if (warnings) {
      warnings->push_back("band with " + std::to_string(freqs.size()) +
                          " modes: the central-difference density needs at least 3; skipped");
    }
    return;
  }
  for (std::size_t i = 1; i + 1 < freqs.size(); ++i) {
    out.push_back({freqs[i], 2.0 / (freqs[i + 1] - freqs[i - 1]), band});
  }
}

}  // namespace

DomCurve dom_numerical(std::span<const double> frequencies, Band band,
                       std::vector<std::string>* warnings) {
  require_sorted_positive(frequencies);
  DomCurve curve;
  curve.method = DomMethod::Numerical;
  append_band(frequencies, band, curve.samples, warnings);
  return curve;
}

DomCurve dom_numerical(std::span<const ModeSolution> modes, std::vector<std::string>* warnings) {
  std::vector<double> band1;
  std::vector<double> band2;
  for (const ModeSolution& m : modes) {
    (m.band == Band::Band1 ? band1 : band2).push_back(m.omega);
  }
  std::sort(band1.begin(), band1.end());
  std::sort(band2.begin(), band2.end());

  DomCurve curve;
  curve.method = DomMethod::Numerical;
  append_band(band1, Band::Band1, curve.samples, warnings);
  append_band(band2, Band::Band2, curve.samples, warnings);
  return curve;
}

double dom_analytical(const HybridLineSpec& spec, double omega) {
  spec.validate();
  if (!(omega > 0.0)) throw std::domain_error("angular frequency must be positive");

  const double rh_term = spec.rh.length *
                         std::sqrt(spec.rh.capacitance_per_length() *
                                   spec.rh.inductance_per_length()) /
                         kPi;

  const double wsl = spec.sl.resonance();
  const double e = spec.sl.ratio;
  const double u = (wsl / omega) * (wsl / omega);
  const double one = 1.0 + 1.0 / e;
  const double cos_kdz = 1.0 - 0.5 * (u * one * one - u * u / (e * e));
  const double sin2 = 1.0 - cos_kdz * cos_kdz;
  if (sin2 <= 0.0) return rh_term;  // gap, outside the bands, or exactly at an edge

  // |dk/domega| of the inverse Bloch dispersion; dz cancels against
  // l_sl = n_sl dz in the mode-count weight.
  const double numer = std::abs(u * one * one - 2.0 * u * u / (e * e)) / omega;
  const double sl_term =
      static_cast<double>(spec.sl.supercell_count) / kPi * numer / std::sqrt(sin2);
  return rh_term + sl_term;
}

DomCurve dom_analytical_curve(const HybridLineSpec& spec, std::span<const double> omegas) {
  const BandEdges edges = band_edges(spec.sl);
  DomCurve curve;
  curve.method = DomMethod::Analytical;
  curve.edges = edges;
  curve.samples.reserve(omegas.size());
  for (double w : omegas) {
    const Band band = w <= edges.lower_max ? Band::Band1 : Band::Band2;
    curve.samples.push_back({w, dom_analytical(spec, w), band});
  }
  std::sort(curve.samples.begin(), curve.samples.end(),
            [](const DomSample& a, const DomSample& b) { return a.omega < b.omega; });
  return curve;
}

PiecewiseDomFit fit_piecewise_dom(const DomCurve& numerical, const BandEdges& edges,
                                  int edge_exclusion) {
  if (edge_exclusion < 0) throw std::invalid_argument("edge exclusion must be non-negative");

  std::vector<DomSample> band1;
  std::vector<DomSample> band2;
  for (const DomSample& s : numerical.samples) {
    (s.band == Band::Band1 ? band1 : band2).push_back(s);
  }

  const auto fit_band = [&](std::vector<DomSample>& samples, auto basis, const char* name,
                            double& alpha, double& residual_rel, int& used) {
    if (static_cast<int>(samples.size()) < std::max(5, 2 * edge_exclusion + 3)) {
      throw std::invalid_argument(std::string("insufficient samples for the piecewise fit in ") +
                                  name);
    }
    std::sort(samples.begin(), samples.end(),
              [](const DomSample& a, const DomSample& b) { return a.omega < b.omega; });
    double sum_df = 0.0;
    double sum_ff = 0.0;
    double sum_dd = 0.0;
    used = 0;
    const std::size_t lo = edge_exclusion;
    const std::size_t hi = samples.size() - edge_exclusion;
    for (std::size_t i = lo; i < hi; ++i) {
      const double f = basis(samples[i].omega);
      if (!std::isfinite(f)) continue;  // sample coincides with an edge
      sum_df += samples[i].density * f;
      sum_ff += f * f;
      sum_dd += samples[i].density * samples[i].density;
      ++used;
    }
    if (used < 3) {
      throw std::invalid_argument(std::string("insufficient usable samples in ") + name);
    }
    alpha = sum_df / sum_ff;
    if (!(alpha > 0.0)) throw std::runtime_error(std::string("non-positive fit amplitude in ") + name);
    double sum_rr = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double f = basis(samples[i].omega);
      if (!std::isfinite(f)) continue;
      const double r = samples[i].density - alpha * f;
      sum_rr += r * r;
    }
    residual_rel = std::sqrt(sum_rr / sum_dd);
  };

  PiecewiseDomFit fit;
  fit_band(
      band1,
      [&](double w) {
        return 1.0 / (std::sqrt(w - edges.lower_min) * std::pow(edges.lower_max - w, 0.25));
      },
      "Band1", fit.alpha1, fit.band1_residual_rel, fit.band1_samples);
  fit_band(
      band2, [&](double w) { return 1.0 / std::sqrt(w - edges.upper_min); }, "Band2", fit.alpha2,
      fit.band2_residual_rel, fit.band2_samples);
  return fit;
}

double piecewise_dom(double omega, double alpha1, double alpha2, const BandEdges& edges) {
  if (omega > edges.lower_min && omega < edges.lower_max) {
    return alpha1 /
           (std::sqrt(omega - edges.lower_min) * std::pow(edges.lower_max - omega, 0.25));
  }
  if (omega > edges.upper_min) {
    return alpha2 / std::sqrt(omega - edges.upper_min);
  }
  return 0.0;
}

DomCurve make_piecewise_curve(const PiecewiseDomFit& fit, const BandEdges& edges) {
  DomCurve curve;
  curve.method = DomMethod::PiecewiseFit;
  curve.alpha1 = fit.alpha1;
  curve.alpha2 = fit.alpha2;
  curve.edges = edges;
  return curve;
}

double spectral_density(double g, const DomCurve& dom, double omega) {
  if (g < 0.0) throw std::domain_error("coupling must be non-negative");
  const double g2 = g * g;

  if (dom.method == DomMethod::PiecewiseFit) {
    if (!dom.edges) throw std::invalid_argument("piecewise-fit curve is missing band edges");
    return g2 * piecewise_dom(omega, dom.alpha1, dom.alpha2, *dom.edges);
  }

  const auto& s = dom.samples;
  auto it = std::lower_bound(s.begin(), s.end(), omega,
                             [](const DomSample& a, double w) { return a.omega < w; });
  if (it != s.end() && it->omega == omega) return g2 * it->density;
  if (it == s.begin() || it == s.end()) return 0.0;
  const DomSample& right = *it;
  const DomSample& left = *(it - 1);
  if (left.band != right.band) return 0.0;  // no interpolation across the gap
  const double t = (omega - left.omega) / (right.omega - left.omega);
  return g2 * (left.density + t * (right.density - left.density));
}

}  // namespace sltl
