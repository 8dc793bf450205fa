#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qlc/analytic.hpp"
#include "qlc/errors.hpp"

using namespace qlc;

namespace {

constexpr double PI = std::numbers::pi;

// Wigner function of a diagonal state from Laguerre polynomials, in (x, y) units.
double laguerre_wigner(const FockOperator& rho, double R2) {
  double w = 0.0;
  for (int n = 0; n < rho.rows(); ++n) {
    const double p = rho(n, n).real();
    if (p < 1e-300) continue;
    w += p * (n % 2 == 0 ? 1.0 : -1.0) * std::laguerre(n, R2);
  }
  return w * std::exp(-0.5 * R2) / (2.0 * PI);
}

// Moments straight from the geometric populations, no truncation.
struct Moments {
  double mean, var;
};
Moments series_moments(double K, double wp) {
  double m1 = 0.0, m2 = 0.0, w = 1.0 - K;
  for (int k = 0; k < 4000 && w > 1e-300; ++k, w *= K) {
    for (int parity : {0, 1}) {
      const double n = 2.0 * k + parity;
      const double p = (parity == 0 ? wp : 1.0 - wp) * w;
      m1 += n * p;
      m2 += n * n * p;
    }
  }
  return {m1, m2 - m1 * m1};
}

double golden_max(const WignerClosedForm& w, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 0; i < 200; ++i) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (w.radial(c) > w.radial(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("closed-form density matrix") {
  const FockOperator rho = rho_ss_analytic(0.5, 0.3, 80);
  CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rho(0, 0).real() == doctest::Approx(0.3 * 0.5));
  CHECK(rho(3, 3).real() == doctest::Approx(0.7 * 0.5 * 0.5));
  CHECK((rho - FockOperator(rho.diagonal().asDiagonal())).norm() == 0.0);
  const FockOperator vac = rho_ss_analytic(0.0, 1.0, 10);
  CHECK(vac(0, 0).real() == 1.0);
  CHECK_THROWS_AS(rho_ss_analytic(1.0, 0.5, 10), PreconditionViolated);
  CHECK_THROWS_AS(rho_ss_analytic(0.5, 1.5, 10), PreconditionViolated);
  for (double K : {0.0, 0.2, 0.9}) {
    for (double wp : {0.0, 0.4, 1.0}) CHECK(mean_n_ss(K, wp) == doctest::Approx(series_moments(K, wp).mean));
  }
}

TEST_CASE("closed-form Wigner function matches the Laguerre expansion") {
  for (double K : {0.0, 1e-10, 0.05, 0.4, 0.8}) {
    for (double wp : {0.0, 0.55, 1.0}) {
      const WignerClosedForm w(K, wp);
      const FockOperator rho = rho_ss_analytic(K, wp, K < 0.5 ? 80 : 400);
      for (double R : {0.0, 0.5, 1.3, 2.7, 4.0}) {
        CHECK(w.cartesian(R, 0.0) == doctest::Approx(laguerre_wigner(rho, R * R)).epsilon(1e-9).scale(1.0));
        CHECK(w.cartesian(0.6 * R, -0.8 * R) == doctest::Approx(w.cartesian(R, 0.0)).epsilon(1e-14));
      }
      CHECK(w.at_origin() == doctest::Approx((2.0 * wp - 1.0) / (2.0 * PI)));
    }
  }
}

TEST_CASE("Wigner normalizations in the three coordinate systems") {
  const WignerClosedForm w(0.3, 0.7);
  // Midpoint rule in R for the (x, y) density, in r for the polar density.
  double cart = 0.0, polar = 0.0;
  const int n = 40000;
  const double Rmax = 30.0, dR = Rmax / n;
  for (int i = 0; i < n; ++i) {
    const double R = (i + 0.5) * dR;
    cart += 2.0 * PI * R * w.cartesian(R, 0.0) * dR;
    polar += 2.0 * PI * w.polar_density(R / 2.0, 1.0) * dR / 2.0;
  }
  CHECK(cart == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(polar == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(w.complex_plane({0.4, -0.2}) == doctest::Approx(4.0 * w.cartesian(0.8, -0.4)));
  CHECK(w.radial(0.5) == doctest::Approx(4.0 * w.cartesian(1.0, 0.0)));
}

TEST_CASE("Wigner closed form stays finite deep in the tail") {
  const WignerClosedForm w(0.99, 0.6);
  for (double R : {10.0, 40.0, 80.0}) CHECK(std::isfinite(w.cartesian(R, 0.0)));
  CHECK(w.cartesian(80.0, 0.0) >= 0.0);
}

TEST_CASE("limit-cycle radius is the mode of the radial Wigner profile") {
  for (double K : {0.05, 0.25, 0.5, 0.9}) {
    for (double wp : {0.0, 0.3, 0.52}) {
      const double rs = limit_cycle_radius(K, wp);
      if (rs == 0.0) continue;
      const WignerClosedForm w(K, wp);
      CHECK(rs == doctest::Approx(golden_max(w, 0.5 * rs, 2.0 * rs)).epsilon(1e-6));
    }
  }
  for (double K : {0.1, 0.6}) {
    CHECK(limit_cycle_log_argument(K, phase_boundary(K)) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(limit_cycle_radius(K, phase_boundary(K) + 1e-6) == 0.0);
  }
}

TEST_CASE("phase classification") {
  CHECK(phase_classify(0.6, 0.9).phase == Phase::I);
  CHECK(phase_classify(0.1, 0.55).phase == Phase::II);
  CHECK(phase_classify(0.2, 0.4).phase == Phase::III);
  CHECK(phase_classify(0.6, 0.53).phase == Phase::II);
  const PhasePoint edge = phase_classify(0.25, phase_boundary(0.25));
  CHECK(edge.phase == Phase::I);
  CHECK(edge.r_star == 0.0);
  CHECK(phase_classify(0.2, 0.4).w0 < 0.0);
  CHECK(std::string(to_string(Phase::II)) == "II");
}

TEST_CASE("Hopf scaling along both directions") {
  const double Kc = 0.25, wpc = phase_boundary(Kc);
  const std::vector<double> offsets{1e-6, 1e-5, 1e-4};
  // Leading-order coefficients from expanding the logarithm to first order in the offset.
  const HopfFit along_wp = hopf_scaling(Kc, wpc, HopfDirection::AlongWpPlus, offsets);
  CHECK(along_wp.slope == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(along_wp.coefficient == doctest::Approx(1.0 / (2.0 * wpc - 1.0)).epsilon(2e-3));
  const HopfFit along_k = hopf_scaling(Kc, wpc, HopfDirection::AlongK, offsets);
  CHECK(along_k.slope == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(along_k.coefficient == doctest::Approx(std::sqrt(2.0) / (1.0 - Kc)).epsilon(2e-3));
  CHECK(along_wp.reference_coefficient == doctest::Approx(2.0 * std::sqrt(2.0) / (2.0 * wpc - 1.0)));
  CHECK_THROWS_AS(hopf_scaling(Kc, 0.6, HopfDirection::AlongK, offsets), PreconditionViolated);
  CHECK_THROWS_AS(hopf_scaling(Kc, wpc, HopfDirection::AlongK, {1e-4, 0.5}), PreconditionViolated);
}

TEST_CASE("Mandel Q formula agrees with series moments") {
  for (double K : {0.0, 0.15, 0.5, 0.85}) {
    for (double wp : {0.0, 0.25, 0.6, 0.95}) {
      const Moments m = series_moments(K, wp);
      CHECK(*mandel_q(K, wp) == doctest::Approx((m.var - m.mean) / m.mean).epsilon(1e-11));
    }
  }
  CHECK(*mandel_q(0.0, 0.0) == -1.0);
  CHECK(!mandel_q(0.0, 1.0).has_value());
  CHECK(sigmoid(0.0) == 0.5);
  // The region boundary is where Q changes sign.
  for (double wp : {0.0, 0.3, 0.7}) {
    const double b = nonclassical_bound(wp);
    CHECK(std::abs(*mandel_q(b, wp)) < 1e-12);
    CHECK(nonclassical_region(b - 1e-6, wp));
    CHECK(!nonclassical_region(b + 1e-6, wp));
  }
}

TEST_CASE("coherent thresholds and tail Gaussian bounds") {
  const CoherentThreshold t = coherent_thresholds(0.5, 0.2);
  CHECK(t.wp_plus == doctest::Approx(0.5 * (1.0 + std::exp(-1.0))));
  CHECK(coherent_thresholds(0.0, 0.2).wp_plus == 1.0);
  const TailGaussian g = tail_gaussian(0.3, 0.4);
  CHECK(g.area_lower <= g.area);
  CHECK(g.area <= g.area_upper);
  CHECK(g.value(0.0, 0.0) == doctest::Approx(g.amplitude));
}

TEST_CASE("steady circulation") {
  CHECK(steady_circulation(2.0, 0.5, 0.25) == doctest::Approx(4.0 * 2.0 * (2.0 + 0.25 + 0.5)));
  CHECK(steady_circulation(1.0, 0.0, 0.0) == 2.0);
}
