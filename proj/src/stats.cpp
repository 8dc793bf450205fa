#include "qlc/stats.hpp"

#include <algorithm>
#include <cmath>

#include "qlc/errors.hpp"

namespace qlc {

namespace {

// c(alpha) = sqrt(-ln(alpha / 2) / 2) at alpha = 0.01.
const double KS_C_1PCT = std::sqrt(-0.5 * std::log(0.005));

double ks_p_value(double d, double n_eff) {
  const double sq = std::sqrt(n_eff);
  return kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d);
}

}  // namespace

void CompensatedSum::add(double v) {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v)) {
    carry_ += (sum_ - t) + v;
  } else {
    carry_ += (v - t) + sum_;
  }
  sum_ = t;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw PreconditionViolated("KS test needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  return {d, ks_p_value(d, n), KS_C_1PCT / std::sqrt(n)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw PreconditionViolated("KS test needs samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double n_eff = na * nb / (na + nb);
  return {d, ks_p_value(d, n_eff), KS_C_1PCT / std::sqrt(n_eff)};
}

}  // namespace qlc
