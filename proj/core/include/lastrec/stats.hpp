#pragma once

#include <functional>
#include <vector>

namespace lastrec {

/// One-sample Kolmogorov-Smirnov statistic sup_x |F_n(x) - F(x)| against the
/// given distribution function. Sorts a copy of the sample.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

struct MomentSummary {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Sample mean of x^k with its standard error.
MomentSummary sample_moment(const std::vector<double>& samples, int k);

}  // namespace lastrec
