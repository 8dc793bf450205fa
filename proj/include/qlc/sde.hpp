#pragma once

// Classical multiplicative-noise oscillator.  Wiener increments have
// variance 8 kappa dt; Cartesian coordinates relate to polar ones through
// (x, y) = (2 r cos phi, 2 r sin phi).

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qlc/stats.hpp"

namespace qlc {

enum class Coordinates { Polar, Cartesian };

struct SdeConfig {
  double kappa = 1.0;
  double delta = 1.0;
  double omega0 = 10.0;
  double dt = 2e-3;
  long n_steps = 1;       // recorded segment per path, after burn-in
  long burn_in = 4000;
  long n_paths = 1000;
  long sample_every = 1;  // record one sample every this many steps of the recorded segment
  std::uint64_t seed = 1;
  Coordinates coordinates = Coordinates::Polar;

  void validate() const;
  long samples_per_path() const { return n_steps / sample_every; }
  // r above which the stationary Rayleigh law keeps less than 1e-4 of its mass.
  double r_max() const;
  double stability_indicator() const { return dt * (3.0 * kappa + delta * r_max() * r_max()); }
};

struct PolarState {
  double r;
  double phi;  // unwrapped
};
struct CartesianState {
  double x;
  double y;
};

PolarState step_polar(const PolarState& s, const SdeConfig& cfg, double dW_r, double dW_phi);
CartesianState step_cartesian(const CartesianState& s, const SdeConfig& cfg, double dW_x, double dW_y);

// Per-path engine: seed and path index mixed through splitmix64.
std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path);

struct SdeSummary {
  double mean_r = 0.0;
  double var_r = 0.0;
  double mean_x2_plus_y2 = 0.0;
  double circulation_empirical = 0.0;
  long samples = 0;
  long diverged_paths = 0;
};

struct SdeEnsembleResult {
  Coordinates coordinates;
  std::vector<double> r, phi, x, y;  // phi wrapped to [0, 2 pi)
  SdeSummary summary;
  std::vector<std::string> warnings;
};

SdeEnsembleResult simulate_ensemble(const SdeConfig& cfg);

double rayleigh_pdf(double r, double kappa, double delta);
double rayleigh_cdf(double r, double kappa, double delta);
double phase_pdf();
double gaussian_pss(double x, double y, double kappa, double delta);
double rayleigh_mean(double kappa, double delta);
double rayleigh_variance(double kappa, double delta);

enum class FpOperator { Radial, Phase, Cartesian };

struct FpResidual {
  double h;
  double max_abs;
};
// Discretized Fokker-Planck generator applied to the analytic stationary density
// on [0, extent] (radial), [0, 2 pi) (phase) or [-extent, extent]^2 (Cartesian).
FpResidual fokker_planck_residual(FpOperator which, const SdeConfig& cfg, double h, double extent);

struct RefinementStudy {
  double coarse;
  double fine;
  double order;  // log2(coarse / fine); NaN when both residuals vanish
};
// Throws GridTooCoarse when the observed order leaves [1.7, 2.3].
RefinementStudy fokker_planck_refinement(FpOperator which, const SdeConfig& cfg, double h, double extent);

struct ClassicalCirculation {
  double empirical;
  double formula;
};
ClassicalCirculation circulation_classical(const SdeConfig& cfg, const SdeEnsembleResult& result);

struct DriftGap {
  double dt;
  double gap_x;  // mean (Stratonovich - Ito) displacement per unit time
  double gap_y;
};
struct DriftReport {
  double x0, y0;
  double expected_x, expected_y;  // 2 kappa (x0, y0)
  std::vector<DriftGap> gaps;
  double slope_x, slope_y;  // least-squares slope of mean displacement gap against dt
  double max_relative_error;  // over the fitted slopes
};
// Heun (Stratonovich) and Euler-Maruyama (Ito) single steps with shared noise,
// both using the drift without the noise-induced term.
DriftReport noise_induced_drift_check(const SdeConfig& cfg, double x0, double y0, const std::vector<double>& dts,
                                      long samples);

struct ClassicalDetailedBalance {
  double h;
  double max_irreversible_flux;
  double max_reversible_divergence;
  double max_flux_scale;  // max |(omega0 y, -omega0 x) P|
  bool diffusion_symmetric;
};
ClassicalDetailedBalance classical_detailed_balance(const SdeConfig& cfg, double h, double extent);

}  // namespace qlc
