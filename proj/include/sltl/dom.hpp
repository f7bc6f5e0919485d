#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sltl/dispersion.hpp"
#include "sltl/modes.hpp"

namespace sltl {

enum class DomMethod { Numerical, Analytical, PiecewiseFit };

struct DomSample {
  double omega = 0.0;    // [rad/s]
  double density = 0.0;  // [s/rad]
  Band band = Band::Band1;
};

/// Density of modes, either tabulated (Numerical / Analytical) or given in
/// closed form by the per-band fit parameters (PiecewiseFit, with the band
/// edges attached). D vanishes in the gap and below the lowest band.
struct DomCurve {
  std::vector<DomSample> samples;
  DomMethod method = DomMethod::Numerical;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  std::optional<BandEdges> edges;
};

/// Central-difference estimator over a sorted single-band mode list,
/// D(omega_i) = 2 / (omega_{i+1} - omega_{i-1}). The first and last mode
/// of the band have a neighbour across the gap (or none) and are skipped.
/// A band with fewer than 3 modes contributes nothing and emits a warning.
DomCurve dom_numerical(std::span<const double> frequencies, Band band,
                       std::vector<std::string>* warnings = nullptr);

/// Same estimator applied per band to a solved mode list.
DomCurve dom_numerical(std::span<const ModeSolution> modes,
                       std::vector<std::string>* warnings = nullptr);

/// Decoupled-line approximation D = (d_r/pi) dk_r/domega
/// + (d_sl/pi) dk_sl/domega. The right-handed term is constant in omega;
/// the superlattice term exists inside the bands and diverges toward the
/// edges. In the gap only the right-handed term is returned.
double dom_analytical(const HybridLineSpec& spec, double omega);

DomCurve dom_analytical_curve(const HybridLineSpec& spec, std::span<const double> omegas);

struct PiecewiseDomFit {
  double alpha1 = 0.0;  // Band1 amplitude [s^... such that D is s/rad]
  double alpha2 = 0.0;  // Band2 amplitude
  double band1_residual_rel = 0.0;  // ||D - alpha f||_2 / ||D||_2 over the fitted samples
  double band2_residual_rel = 0.0;
  int band1_samples = 0;
  int band2_samples = 0;
};

/// Least-squares amplitudes of the per-band model
///   Band1: alpha1 / (sqrt(omega - omega_1-) (omega_1+ - omega)^{1/4})
///   Band2: alpha2 / sqrt(omega - omega_2)
/// fitted to a numerical curve. The fit is linear in each alpha, so it is
/// solved in closed form as a ratio of sums. edge_exclusion samples
/// nearest each band edge are dropped (the model diverges there and the
/// estimator does not). Throws std::invalid_argument on insufficient
/// samples and std::runtime_error on a non-positive fit.
PiecewiseDomFit fit_piecewise_dom(const DomCurve& numerical, const BandEdges& edges,
                                  int edge_exclusion = 5);

/// Closed-form piecewise DOM value; zero in the gap and below the bands.
double piecewise_dom(double omega, double alpha1, double alpha2, const BandEdges& edges);

DomCurve make_piecewise_curve(const PiecewiseDomFit& fit, const BandEdges& edges);

/// Spectral density J(omega) = g^2 D(omega). Sampled curves are linearly
/// interpolated between same-band neighbours; fit curves evaluate the
/// closed form. Throws std::domain_error for g < 0.
double spectral_density(double g, const DomCurve& dom, double omega);

}  // namespace sltl
