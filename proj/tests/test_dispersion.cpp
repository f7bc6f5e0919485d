#include <cmath>
#include <numbers>
#include <stdexcept>

#include <doctest.h>

#include "sltl/circuit.hpp"
#include "sltl/dispersion.hpp"
#include "test_helpers.hpp"

using namespace sltl;
using sltl::testing::rel_diff;

namespace {

constexpr double kPi = std::numbers::pi;

SuperlatticeSpec sl_spec(double ratio) {
  SuperlatticeSpec spec;
  spec.inductance = 6.0e-10;
  spec.capacitance = 2.0e-13;
  spec.ratio = ratio;
  spec.supercell_count = 200;
  spec.supercell_length = 1.0e-4;
  return spec;
}

RightHandedSpec rh_spec() {
  RightHandedSpec rh;
  rh.cell_inductance = 7.5e-10;
  rh.cell_capacitance = 2.5e-13;
  rh.cell_count = 20;
  rh.length = 0.01;
  return rh;
}

}  // namespace

TEST_CASE("right-handed discrete dispersion") {
  const RightHandedSpec rh = rh_spec();
  const double k_max = kPi * rh.cell_count / rh.length;

  CHECK(rh_dispersion_discrete(rh, 0.0) == 0.0);
  CHECK(rh_dispersion_discrete(rh, k_max) == doctest::Approx(rh.cutoff()).epsilon(1e-14));
  // k_max/3 maps to sin(pi/6) = 1/2, i.e. exactly omega_r.
  CHECK(rh_dispersion_discrete(rh, k_max / 3.0) ==
        doctest::Approx(7.30296743340221e10).epsilon(1e-12));

  CHECK_THROWS_AS(rh_dispersion_discrete(rh, -1.0), std::domain_error);
  CHECK_THROWS_AS(rh_dispersion_discrete(rh, 1.01 * k_max), std::domain_error);

  // monotone over the domain
  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double w = rh_dispersion_discrete(rh, k_max * i / 100.0);
    CHECK(w >= prev);
    prev = w;
  }
}

TEST_CASE("right-handed continuum dispersion") {
  const RightHandedSpec rh = rh_spec();
  CHECK(rh_dispersion_continuum(rh, 0.0) == 0.0);
  CHECK_THROWS_AS(rh_dispersion_continuum(rh, -1.0), std::domain_error);

  const double k = 123.0;
  CHECK(rh_dispersion_continuum(rh, 2.0 * k) ==
        doctest::Approx(2.0 * rh_dispersion_continuum(rh, k)).epsilon(1e-15));

  // small-angle agreement with the discrete form
  const double k_max = kPi * rh.cell_count / rh.length;
  for (double frac : {0.01, 0.05, 0.1}) {
    const double kk = frac * k_max;
    CHECK(rel_diff(rh_dispersion_continuum(rh, kk), rh_dispersion_discrete(rh, kk)) < 0.005);
  }

  // round trip through the inverse
  const double omega = rh_dispersion_continuum(rh, k);
  CHECK(rh_wavenumber_continuum(rh, omega) == doctest::Approx(k).epsilon(1e-14));
}

TEST_CASE("superlattice dispersion at the spec points") {
  const SuperlatticeSpec spec = sl_spec(2.0);
  const double wsl = spec.resonance();
  const double dz = spec.supercell_length;

  // k = 0 on the lower branch is the band bottom omega_sl/(1+eps)
  CHECK(sl_dispersion(spec, 0.0, Branch::Lower).value() ==
        doctest::Approx(wsl / 3.0).epsilon(1e-14));

  // k dz = pi on the lower branch is the band top (frozen closed-form value)
  CHECK(sl_dispersion(spec, kPi / dz, Branch::Lower).value() ==
        doctest::Approx(0.390388203202208 * wsl).epsilon(1e-12));

  // upper branch at k = 0 is unbounded
  CHECK_FALSE(sl_dispersion(spec, 0.0, Branch::Upper).has_value());

  // k dz = 2 pi/3 on the upper branch with equal cells returns omega_sl
  const SuperlatticeSpec equal = sl_spec(1.0);
  CHECK(sl_dispersion(equal, 2.0 * kPi / 3.0 / dz, Branch::Upper).value() ==
        doctest::Approx(equal.resonance()).epsilon(1e-12));

  CHECK_THROWS_AS(sl_dispersion(spec, -1.0, Branch::Lower), std::domain_error);
  CHECK_THROWS_AS(sl_dispersion(spec, 1.01 * kPi / dz, Branch::Lower), std::domain_error);
}

TEST_CASE("band edges") {
  const double wsl = sl_spec(2.0).resonance();

  SUBCASE("equal cells close the gap") {
    const BandEdges e = band_edges(wsl, 1.0);
    CHECK(e.lower_max == doctest::Approx(wsl / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(e.gap_width() == 0.0);
  }

  SUBCASE("ratio 2 frozen values") {
    const BandEdges e = band_edges(wsl, 2.0);
    CHECK(rel_diff(e.lower_min, wsl / 3.0) < 1e-14);
    CHECK(rel_diff(e.lower_max, 0.390388203202208 * wsl) < 1e-12);
    CHECK(rel_diff(e.upper_min, 0.640388203202208 * wsl) < 1e-12);
    CHECK(rel_diff(e.band1_width(), 0.0570548698688743 * wsl) < 1e-11);
    CHECK(e.lower_min <= e.lower_max);
    CHECK(e.lower_max <= e.upper_min);
  }

  SUBCASE("consistent with the dispersion extremes") {
    for (double ratio : {1.1, 2.0, 5.0}) {
      const SuperlatticeSpec spec = sl_spec(ratio);
      const BandEdges e = band_edges(spec);
      const double dz = spec.supercell_length;
      CHECK(rel_diff(sl_dispersion(spec, 0.0, Branch::Lower).value(), e.lower_min) < 1e-12);
      CHECK(rel_diff(sl_dispersion(spec, kPi / dz, Branch::Lower).value(), e.lower_max) < 1e-12);
      CHECK(rel_diff(sl_dispersion(spec, kPi / dz, Branch::Upper).value(), e.upper_min) < 1e-12);
    }
  }
}

TEST_CASE("bandwidth curve") {
  const double wsl = 9.12870929175277e10;
  const std::vector<double> ratios = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0};
  const auto curve = bandwidth_curve(wsl, ratios);
  REQUIRE(curve.size() == ratios.size());

  double best_ratio = 0.0;
  double best_width = -1.0;
  for (const auto& [ratio, width] : curve) {
    if (width > best_width) {
      best_width = width;
      best_ratio = ratio;
    }
  }
  CHECK(best_ratio == 1.0);
  CHECK(rel_diff(best_width, 0.207106781186547 * wsl) < 1e-12);

  const double width5 = curve.back().second;
  CHECK(rel_diff(width5, 0.0074990720107275 * wsl) < 1e-11);
  CHECK(width5 / best_width == doctest::Approx(0.0362087227070216).epsilon(1e-10));
  CHECK(width5 / best_width < 0.05);
}

TEST_CASE("branch ranges and monotonicity") {
  for (double ratio : {1.0, 1.1, 2.0, 5.0}) {
    const SuperlatticeSpec spec = sl_spec(ratio);
    const BandEdges e = band_edges(spec);
    const double dz = spec.supercell_length;

    double prev_lower = -1.0;
    double prev_upper = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 1000; ++i) {
      const double k = kPi * i / 1000.0 / dz;
      const double lower = sl_dispersion(spec, k, Branch::Lower).value();
      const double upper = sl_dispersion(spec, k, Branch::Upper).value();
      CHECK(lower >= e.lower_min * (1.0 - 1e-12));
      CHECK(lower <= e.lower_max * (1.0 + 1e-12));
      CHECK(upper >= e.upper_min * (1.0 - 1e-12));
      CHECK(lower >= prev_lower);        // lower branch rises with k
      CHECK(upper <= prev_upper);        // upper branch falls with k (left-handed)
      prev_lower = lower;
      prev_upper = upper;
    }
  }
}

TEST_CASE("trace closure: every dispersion output solves 2cos(k dz) = b11 + b22") {
  for (double ratio : {1.1, 2.0}) {
    const SuperlatticeSpec spec = sl_spec(ratio);
    const double dz = spec.supercell_length;
    for (int i = 1; i < 200; ++i) {
      const double k = kPi * i / 200.0 / dz;
      for (Branch branch : {Branch::Lower, Branch::Upper}) {
        const double omega = sl_dispersion(spec, k, branch).value();
        const double trace = supercell_abcd(spec, omega).trace().real();
        CHECK(std::abs(0.5 * trace - std::cos(k * dz)) < 1e-9);
        // and the inverse recovers k
        CHECK(rel_diff(sl_wavenumber(spec, omega), k) < 1e-8);
      }
    }
  }
}

TEST_CASE("wavenumber inversion rejects the gap") {
  const SuperlatticeSpec spec = sl_spec(2.0);
  const BandEdges e = band_edges(spec);
  CHECK_THROWS_AS(sl_wavenumber(spec, 0.5 * (e.lower_max + e.upper_min)), std::domain_error);
  CHECK_THROWS_AS(sl_wavenumber(spec, 0.5 * e.lower_min), std::domain_error);
}

TEST_CASE("Euler-Lagrange oracle equivalence") {
  SUBCASE("spot checks from the operation contract") {
    const SuperlatticeSpec spec = sl_spec(2.0);
    const double dz = spec.supercell_length;
    CHECK(rel_diff(el_oracle_dispersion(spec, 0.5 * kPi / dz, Branch::Lower).value(),
                   sl_dispersion(spec, 0.5 * kPi / dz, Branch::Lower).value()) < 1e-9);

    // k -> 0 limit approaches the band bottom
    const double w_small = el_oracle_dispersion(spec, 1e-4 / dz, Branch::Lower).value();
    CHECK(rel_diff(w_small, band_edges(spec).lower_min) < 1e-6);

    const SuperlatticeSpec spec11 = sl_spec(1.1);
    CHECK(rel_diff(el_oracle_dispersion(spec11, kPi / dz, Branch::Upper).value(),
                   band_edges(spec11).upper_min) < 1e-9);
  }

  SUBCASE("grid equivalence at 1e-9") {
    for (double ratio : {1.0, 1.1, 2.0, 5.0}) {
      const SuperlatticeSpec spec = sl_spec(ratio);
      const double dz = spec.supercell_length;
      for (int i = 1; i <= 1000; ++i) {
        const double k = kPi * i / 1000.0 / dz;
        for (Branch branch : {Branch::Lower, Branch::Upper}) {
          const double reference = sl_dispersion(spec, k, branch).value();
          const double oracle = el_oracle_dispersion(spec, k, branch).value();
          CHECK(std::abs(oracle - reference) <= 1e-9 * reference);
        }
      }
    }
  }

  SUBCASE("k = 0 is outside the oracle domain") {
    const SuperlatticeSpec spec = sl_spec(2.0);
    CHECK_THROWS_AS(el_oracle_dispersion(spec, 0.0, Branch::Lower), std::domain_error);
  }
}
