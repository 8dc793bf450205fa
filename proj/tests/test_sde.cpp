#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "qlc/errors.hpp"
#include "qlc/sde.hpp"
#include "qlc/stats.hpp"

using namespace qlc;

namespace {

constexpr double PI = std::numbers::pi;

SdeConfig small_config() {
  SdeConfig c;
  c.kappa = 1.0;
  c.delta = 1.0;
  c.omega0 = 10.0;
  c.dt = 2e-3;
  c.burn_in = 2000;
  c.n_steps = 2000;
  c.sample_every = 500;
  c.n_paths = 400;
  c.seed = 42;
  return c;
}

}  // namespace

TEST_CASE("compensated sum recovers cancelled low-order bits") {
  CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);
}

TEST_CASE("Kolmogorov distribution against tabulated quantiles") {
  CHECK(kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_survival(1.6276) == doctest::Approx(0.01).epsilon(1e-3));
  CHECK(kolmogorov_survival(0.0) == 1.0);
  CHECK(kolmogorov_survival(5.0) < 1e-20);
}

TEST_CASE("KS tests accept matching and reject mismatched samples") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(20000), b(20000);
  for (auto& v : a) v = u(rng);
  for (auto& v : b) v = u(rng);
  const KsResult one = ks_one_sample(a, [](double x) { return x; });
  CHECK(one.passes_1pct());
  CHECK(one.p_value > 0.01);
  CHECK(ks_two_sample(a, b).p_value > 0.01);
  CHECK(ks_two_sample(a, a).statistic == 0.0);
  const KsResult skewed = ks_one_sample(a, [](double x) { return x * x; });
  CHECK(!skewed.passes_1pct());
  CHECK(skewed.statistic == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("stationary laws are normalized and consistent") {
  const double k = 0.7, d = 1.9;
  double mass = 0.0, mean = 0.0, second = 0.0;
  const int n = 200000;
  const double rmax = 20.0, dr = rmax / n;
  for (int i = 0; i < n; ++i) {
    const double r = (i + 0.5) * dr;
    const double p = rayleigh_pdf(r, k, d);
    mass += p * dr;
    mean += r * p * dr;
    second += r * r * p * dr;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(mean == doctest::Approx(rayleigh_mean(k, d)).epsilon(1e-9));
  CHECK(second - mean * mean == doctest::Approx(rayleigh_variance(k, d)).epsilon(1e-8));
  CHECK((rayleigh_cdf(1.0 + 1e-6, k, d) - rayleigh_cdf(1.0 - 1e-6, k, d)) / 2e-6 ==
        doctest::Approx(rayleigh_pdf(1.0, k, d)).epsilon(1e-8));
  CHECK(phase_pdf() * 2.0 * PI == doctest::Approx(1.0));
  // Polar and Cartesian stationary laws describe the same distribution: (x, y) = 2 r (cos, sin).
  const double r = 0.8, R = 2.0 * r;
  CHECK(gaussian_pss(R, 0.0, k, d) * 2.0 * PI * R * 2.0 == doctest::Approx(rayleigh_pdf(r, k, d)));
}

TEST_CASE("noiseless steps respect the deterministic fixed points") {
  SdeConfig c = small_config();
  const double r_fix = std::sqrt(3.0 * c.kappa / c.delta);
  const PolarState p = step_polar({r_fix, 0.3}, c, 0.0, 0.0);
  CHECK(p.r == doctest::Approx(r_fix).epsilon(1e-15));
  CHECK(p.phi == doctest::Approx(0.3 - c.omega0 * c.dt));
  // Cartesian radial drift 2 kappa - delta R^2 / 4 vanishes at R^2 = 8 kappa / delta.
  const double R = std::sqrt(8.0 * c.kappa / c.delta);
  const CartesianState s = step_cartesian({R * 0.6, R * 0.8}, c, 0.0, 0.0);
  CHECK(std::hypot(s.x, s.y) == doctest::Approx(R).epsilon(1e-14));
  CHECK(std::atan2(s.y, s.x) == doctest::Approx(std::atan2(0.8, 0.6) - c.omega0 * c.dt));
  CHECK(step_polar({0.0, 0.0}, c, 1.0, 1.0).r == 0.0);
}

TEST_CASE("ensembles are reproducible from the seed") {
  const SdeConfig c = small_config();
  const SdeEnsembleResult a = simulate_ensemble(c), b = simulate_ensemble(c);
  CHECK(a.r == b.r);
  CHECK(a.summary.samples == c.n_paths * c.samples_per_path());
  SdeConfig other = c;
  other.seed = 43;
  CHECK(simulate_ensemble(other).r != a.r);
  CHECK(path_engine(1, 2)() == path_engine(1, 2)());
  CHECK(path_engine(1, 2)() != path_engine(1, 3)());
}

TEST_CASE("small ensemble reproduces the Rayleigh law") {
  SdeConfig c = small_config();
  c.n_paths = 4000;
  for (Coordinates coords : {Coordinates::Polar, Coordinates::Cartesian}) {
    c.coordinates = coords;
    const SdeEnsembleResult res = simulate_ensemble(c);
    CHECK(res.summary.mean_r == doctest::Approx(rayleigh_mean(1.0, 1.0)).epsilon(0.03));
    CHECK(ks_one_sample(res.r, [](double r) { return rayleigh_cdf(r, 1.0, 1.0); }).p_value > 0.001);
    const ClassicalCirculation circ = circulation_classical(c, res);
    CHECK(circ.formula == doctest::Approx(80.0));
    CHECK(circ.empirical == doctest::Approx(80.0).epsilon(0.05));
  }
}

TEST_CASE("configuration validation") {
  SdeConfig c = small_config();
  c.kappa = 0.0;
  CHECK_THROWS_AS(c.validate(), PreconditionViolated);
  c = small_config();
  c.sample_every = c.n_steps + 1;
  CHECK_THROWS_AS(c.validate(), PreconditionViolated);
  c = small_config();
  CHECK(c.r_max() == doctest::Approx(std::sqrt(2.0 * std::log(1e4))));
  CHECK(c.stability_indicator() == doctest::Approx(c.dt * (3.0 + c.r_max() * c.r_max())));
}

TEST_CASE("Fokker-Planck residuals of the stationary laws") {
  const SdeConfig c = small_config();
  const RefinementStudy cart = fokker_planck_refinement(FpOperator::Cartesian, c, 0.1, 12.0);
  CHECK(cart.order == doctest::Approx(2.0).epsilon(0.05));
  const RefinementStudy radial = fokker_planck_refinement(FpOperator::Radial, c, 0.02, 8.0);
  CHECK(radial.order == doctest::Approx(2.0).epsilon(0.05));
  // Uniform phase density: every difference vanishes identically.
  CHECK(std::isnan(fokker_planck_refinement(FpOperator::Phase, c, 0.1, 1.0).order));
  // A grid so coarse that the stencil never resolves the density.
  CHECK_THROWS_AS(fokker_planck_refinement(FpOperator::Cartesian, c, 3.0, 12.0), GridTooCoarse);
}

TEST_CASE("noise-induced drift gap converges to 2 kappa (x, y)") {
  SdeConfig c = small_config();
  c.kappa = 0.5;
  c.omega0 = 1.0;
  const DriftReport rep = noise_induced_drift_check(c, 0.6, -0.4, {1e-2, 5e-3}, 100000);
  CHECK(rep.expected_x == doctest::Approx(0.6));
  CHECK(rep.expected_y == doctest::Approx(-0.4));
  CHECK(rep.max_relative_error < 0.05);
  CHECK_THROWS_AS(noise_induced_drift_check(c, 0.0, 0.0, {}, 10), PreconditionViolated);
}

TEST_CASE("classical detailed balance: irreversible flux vanishes, rotation is divergence free") {
  const SdeConfig c = small_config();
  const ClassicalDetailedBalance coarse = classical_detailed_balance(c, 0.1, 12.0);
  const ClassicalDetailedBalance fine = classical_detailed_balance(c, 0.05, 12.0);
  CHECK(coarse.diffusion_symmetric);
  CHECK(coarse.max_irreversible_flux < 1e-2 * coarse.max_flux_scale);
  CHECK(fine.max_irreversible_flux < 0.3 * coarse.max_irreversible_flux);
  CHECK(fine.max_reversible_divergence < 0.3 * coarse.max_reversible_divergence + 1e-15);
}
