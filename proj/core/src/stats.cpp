#include "lastrec/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lastrec {

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max((i + 1) / n - f, f - i / n));
  }
  return d;
}

MomentSummary sample_moment(const std::vector<double>& samples, int k) {
  if (samples.empty()) throw std::invalid_argument("sample_moment: empty sample");
  double sum = 0.0, sum_sq = 0.0;
  for (const double x : samples) {
    const double p = std::pow(x, k);
    sum += p;
    sum_sq += p * p;
  }
  const double n = static_cast<double>(samples.size());
  MomentSummary out;
  out.mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - out.mean * out.mean);
  out.std_error = std::sqrt(var / n);
  return out;
}

}  // namespace lastrec
