#include "qlc/analytic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qlc/errors.hpp"

namespace qlc {

namespace {

constexpr double PI = std::numbers::pi;
constexpr double SMALL_K = 1e-8;

void require_K(double K, bool allow_zero) {
  if (!(K < 1.0) || K < 0.0 || (!allow_zero && K == 0.0)) {
    throw PreconditionViolated("K must lie in " + std::string(allow_zero ? "[0, 1)" : "(0, 1)") +
                               ", got " + std::to_string(K));
  }
}

void require_weight(double wp_plus) {
  if (!(wp_plus >= 0.0 && wp_plus <= 1.0)) {
    throw PreconditionViolated("parity weight must lie in [0, 1], got " + std::to_string(wp_plus));
  }
}

}  // namespace

FockOperator rho_ss_analytic(double K, double wp_plus, int dim) {
  require_K(K, true);
  require_weight(wp_plus);
  if (dim < 2) throw InvalidDimension("Fock dimension must be at least 2");
  Eigen::VectorXd pop(dim);
  double weight = 1.0;
  for (int k = 0; k < dim; k += 2) {
    pop(k) = wp_plus * weight;
    if (k + 1 < dim) pop(k + 1) = (1.0 - wp_plus) * weight;
    weight *= K;
  }
  pop /= pop.sum();
  return pop.cast<cplx>().asDiagonal();
}

double mean_n_ss(double K, double wp_plus) {
  require_K(K, true);
  return 2.0 * K / (1.0 - K) + (1.0 - wp_plus);
}

WignerClosedForm::WignerClosedForm(double K, double wp_plus) : K_(K), wp_plus_(wp_plus) {
  require_K(K, true);
  require_weight(wp_plus);
  sqrtK_ = std::sqrt(K);
  gamma_ = (1.0 - K) / (4.0 * PI);
  eta_ = sqrtK_ / (1.0 - sqrtK_);
  lambda_ = sqrtK_ / (1.0 + sqrtK_);
}

double WignerClosedForm::even_R2(double R2) const {
  if (K_ < SMALL_K) return std::exp(-0.5 * R2) / (2.0 * PI);
  const double s = sqrtK_;
  // Exponents are merged so large R2 cannot produce inf * 0.
  return gamma_ * (std::exp(-(0.5 + eta_) * R2) / (1.0 - s) + std::exp((lambda_ - 0.5) * R2) / (1.0 + s));
}

double WignerClosedForm::odd_R2(double R2) const {
  // Below SMALL_K the bracket is 0/0; its limit is the one-photon Wigner function.
  if (K_ < SMALL_K) return (R2 - 1.0) * std::exp(-0.5 * R2) / (2.0 * PI);
  const double s = sqrtK_;
  return gamma_ / s * (std::exp((lambda_ - 0.5) * R2) / (1.0 + s) - std::exp(-(0.5 + eta_) * R2) / (1.0 - s));
}

double WignerClosedForm::even(double x, double y) const { return even_R2(x * x + y * y); }
double WignerClosedForm::odd(double x, double y) const { return odd_R2(x * x + y * y); }

double WignerClosedForm::cartesian(double x, double y) const {
  const double R2 = x * x + y * y;
  return wp_plus_ * even_R2(R2) + (1.0 - wp_plus_) * odd_R2(R2);
}

double WignerClosedForm::complex_plane(std::complex<double> alpha) const {
  return 4.0 * cartesian(2.0 * alpha.real(), 2.0 * alpha.imag());
}

double WignerClosedForm::radial(double r) const {
  const double R2 = 4.0 * r * r;
  return 4.0 * (wp_plus_ * even_R2(R2) + (1.0 - wp_plus_) * odd_R2(R2));
}

double WignerClosedForm::polar_density(double r, double /*phi*/) const { return r * radial(r); }

double WignerClosedForm::at_origin() const { return cartesian(0.0, 0.0); }

double limit_cycle_log_argument(double K, double wp_plus) {
  require_K(K, false);
  const double s = std::sqrt(K);
  const double base = 1.0 - (1.0 - K) * wp_plus;
  const double num = std::pow(1.0 + s, 4) * (base - s);
  const double den = std::pow(1.0 - s, 4) * (base + s);
  return num / den;
}

double limit_cycle_radius(double K, double wp_plus) {
  require_weight(wp_plus);
  const double arg = limit_cycle_log_argument(K, wp_plus);
  if (!(arg > 1.0)) return 0.0;
  const double s = std::sqrt(K);
  const double r2 = (1.0 - K) / (8.0 * s) * std::log(arg);
  return r2 > 0.0 ? std::sqrt(r2) : 0.0;
}

double phase_boundary(double K) { return (3.0 + K) / (4.0 * (1.0 + K)); }

const char* to_string(Phase ph) {
  switch (ph) {
    case Phase::I: return "I";
    case Phase::II: return "II";
    case Phase::III: return "III";
  }
  return "?";
}

PhasePoint phase_classify(double K, double wp_plus) {
  require_K(K, false);
  require_weight(wp_plus);
  PhasePoint pt;
  pt.K = K;
  pt.wp_plus = wp_plus;
  // Decide on the closed boundary first so a rounding-level positive radius at the tie does not flip the label.
  const bool phase_one = wp_plus >= phase_boundary(K);
  pt.r_star = phase_one ? 0.0 : limit_cycle_radius(K, wp_plus);
  pt.w0 = (2.0 * wp_plus - 1.0) / (2.0 * PI);
  pt.q_ss = mandel_q(K, wp_plus);
  if (phase_one) {
    pt.phase = Phase::I;
  } else if (wp_plus >= 0.5) {
    pt.phase = Phase::II;
  } else {
    pt.phase = Phase::III;
  }
  return pt;
}

RadialScan radial_mode_scan(double K, double wp_plus, int points) {
  if (points < 2) throw PreconditionViolated("radial scan needs at least two points");
  const WignerClosedForm w(K, wp_plus);
  RadialScan scan;
  scan.r_max = 2.0 * std::sqrt(mean_n_ss(K, wp_plus) + 3.0);
  scan.dr = scan.r_max / (points - 1);
  scan.argmax = 0;
  double best = w.radial(0.0);
  scan.min_value = best;
  for (int i = 1; i < points; ++i) {
    const double v = w.radial(i * scan.dr);
    if (v > best) {
      best = v;
      scan.argmax = i;
    }
    scan.min_value = std::min(scan.min_value, v);
  }
  scan.r_argmax = scan.argmax * scan.dr;
  return scan;
}

HopfFit hopf_scaling(double K_c, double wp_c, HopfDirection direction, const std::vector<double>& offsets) {
  require_K(K_c, false);
  if (std::abs(wp_c - phase_boundary(K_c)) > 1e-12) {
    throw PreconditionViolated("critical point is not on the I/II boundary");
  }
  if (offsets.size() < 2) throw PreconditionViolated("need at least two offsets");
  HopfFit fit;
  fit.direction = direction;
  fit.offsets = offsets;
  for (double d : offsets) {
    if (!(d > 0.0) || d > 1e-2) throw PreconditionViolated("offsets must lie in (0, 1e-2]");
    const double K = direction == HopfDirection::AlongK ? K_c - d : K_c;
    const double wp = direction == HopfDirection::AlongWpPlus ? wp_c - d : wp_c;
    if (K <= 0.0 || wp < 0.0 || wp >= phase_boundary(K)) {
      throw PreconditionViolated("offset " + std::to_string(d) + " does not move into phase II");
    }
    fit.radii.push_back(limit_cycle_radius(K, wp));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, num = 0, den = 0;
  const double n = static_cast<double>(offsets.size());
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const double lx = std::log(offsets[i]);
    const double ly = std::log(fit.radii[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    num += fit.radii[i] * std::sqrt(offsets[i]);
    den += offsets[i];
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.coefficient = num / den;
  fit.reference_coefficient = direction == HopfDirection::AlongWpPlus ? 2.0 * std::sqrt(2.0) / (2.0 * wp_c - 1.0)
                                                                      : 4.0 / (1.0 - K_c);
  return fit;
}

std::optional<double> mandel_q(double K, double wp_plus) {
  require_K(K, true);
  require_weight(wp_plus);
  const double denom = 1.0 + K - wp_plus * (1.0 - K);
  if (!(denom > 0.0)) return std::nullopt;
  return 2.0 / (1.0 - K) + 2.0 * K / denom + wp_plus - 3.0;
}

double sigmoid(double q) { return 1.0 / (1.0 + std::exp(-q)); }

double nonclassical_bound(double wp_plus) {
  const double u = wp_plus * (2.0 - wp_plus);
  return (std::sqrt(5.0 - 4.0 * u) - 3.0) / (1.0 + u) + 1.0;
}

bool nonclassical_region(double K, double wp_plus) {
  require_K(K, true);
  require_weight(wp_plus);
  return wp_plus < 1.0 && K < nonclassical_bound(wp_plus);
}

CoherentThreshold coherent_thresholds(double alpha_sq, double K) {
  if (alpha_sq < 0.0) throw PreconditionViolated("|alpha|^2 must be nonnegative");
  require_K(K, true);
  CoherentThreshold t;
  // e^{-x} cosh x written to stay finite for large x.
  t.wp_plus = 0.5 * (1.0 + std::exp(-2.0 * alpha_sq));
  t.alpha_sq_threshold = 0.5 * std::log(2.0 * (1.0 + K) / (1.0 - K));
  t.limit_cycle = alpha_sq > t.alpha_sq_threshold;
  return t;
}

double TailGaussian::value(double x, double y) const {
  return amplitude * std::exp(-decay_rate * (x * x + y * y));
}

TailGaussian tail_gaussian(double K, double wp_plus) {
  require_K(K, false);
  require_weight(wp_plus);
  const double s = std::sqrt(K);
  TailGaussian g;
  g.amplitude = (1.0 - s) / (4.0 * PI * s) * (1.0 - (1.0 - s) * wp_plus);
  g.decay_rate = (1.0 - s) / (2.0 * (1.0 + s));
  g.area = (1.0 + s) * (1.0 - (1.0 - s) * wp_plus) / (2.0 * s);
  g.area_lower = (1.0 + s) / 2.0;
  g.area_upper = (1.0 + s) / (2.0 * s);
  return g;
}

double steady_circulation(double omega0, double K, double wp_minus) {
  require_K(K, true);
  return 4.0 * omega0 * (2.0 * K / (1.0 - K) + wp_minus + 0.5);
}

}  // namespace qlc
