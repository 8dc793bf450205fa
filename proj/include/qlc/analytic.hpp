#pragma once

// Closed-form steady-state results of the noise-induced model.
//
// Coordinates: alpha = (x + i y) / 2.  W(x, y) integrates to one over dx dy,
// Wbar(alpha) = 4 W(x, y) integrates to one over d^2 alpha, and the polar
// density r * Wbar(r e^{i phi}) integrates to one over dr dphi.

#include <complex>
#include <optional>
#include <vector>

#include "qlc/fock.hpp"

namespace qlc {

// Diagonal state wp_plus * rho_even + (1 - wp_plus) * rho_odd with geometric
// populations (1 - K) K^n on each ladder, truncated and renormalized.
FockOperator rho_ss_analytic(double K, double wp_plus, int dim);
double mean_n_ss(double K, double wp_plus);

class WignerClosedForm {
 public:
  WignerClosedForm(double K, double wp_plus);

  double K() const { return K_; }
  double wp_plus() const { return wp_plus_; }
  double gamma() const { return gamma_; }
  double eta() const { return eta_; }
  double lambda() const { return lambda_; }

  double even(double x, double y) const;
  double odd(double x, double y) const;
  double cartesian(double x, double y) const;
  double complex_plane(std::complex<double> alpha) const;
  // Wbar at |alpha| = r.
  double radial(double r) const;
  // r * Wbar(r e^{i phi}); independent of phi.
  double polar_density(double r, double phi) const;
  double at_origin() const;

 private:
  double even_R2(double R2) const;
  double odd_R2(double R2) const;

  double K_, wp_plus_, sqrtK_, gamma_, eta_, lambda_;
};

// Argument of the logarithm in the limit-cycle radius formula.
double limit_cycle_log_argument(double K, double wp_plus);
double limit_cycle_radius(double K, double wp_plus);
double phase_boundary(double K);  // wp_plus on the I/II boundary

enum class Phase { I, II, III };
const char* to_string(Phase ph);

struct PhasePoint {
  double K;
  double wp_plus;
  double r_star;
  double w0;
  std::optional<double> q_ss;
  Phase phase;
};

PhasePoint phase_classify(double K, double wp_plus);

struct RadialScan {
  double r_max;
  double dr;
  int argmax;
  double r_argmax;
  double min_value;
};
// Uniform scan of r -> Wbar on [0, r_max], r_max = 2 sqrt(<n> + 3).
RadialScan radial_mode_scan(double K, double wp_plus, int points = 2048);

enum class HopfDirection { AlongWpPlus, AlongK };

struct HopfFit {
  HopfDirection direction;
  std::vector<double> offsets;
  std::vector<double> radii;
  double slope;        // least-squares slope of log r* vs log offset
  double coefficient;  // least-squares c in r* = c sqrt(offset)
  double reference_coefficient;  // 2 sqrt2 / (2 wp_c - 1) along wp, 4 / (1 - K_c) along K
};

// (K_c, wp_c) must lie on the I/II boundary; offsets move into phase II.
HopfFit hopf_scaling(double K_c, double wp_c, HopfDirection direction, const std::vector<double>& offsets);

// Empty when <n> = 0, i.e. (K, wp_plus) = (0, 1).
std::optional<double> mandel_q(double K, double wp_plus);
double sigmoid(double q);
double nonclassical_bound(double wp_plus);  // region is K below this value
bool nonclassical_region(double K, double wp_plus);

struct CoherentThreshold {
  double wp_plus;
  bool limit_cycle;
  double alpha_sq_threshold;
};
CoherentThreshold coherent_thresholds(double alpha_sq, double K);

struct TailGaussian {
  double amplitude;   // in W(x, y) units
  double decay_rate;  // W_G = amplitude * exp(-decay_rate (x^2 + y^2))
  double area;
  double area_lower;
  double area_upper;
  double value(double x, double y) const;
};
TailGaussian tail_gaussian(double K, double wp_plus);

// Steady-state circulation 4 omega0 (2K/(1-K) + wp_minus + 1/2).
double steady_circulation(double omega0, double K, double wp_minus);

}  // namespace qlc
