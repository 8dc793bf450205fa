#pragma once

#include <functional>
#include <vector>

namespace qlc {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v);
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct KsResult {
  double statistic;
  double p_value;
  double critical_1pct;  // asymptotic critical value at the 1% level
  bool passes_1pct() const { return statistic < critical_1pct; }
};

// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace qlc
