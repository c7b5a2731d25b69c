#include "lastrec/uniform_case.hpp"

#include <cmath>
#include <stdexcept>

#include "lastrec/incomplete_gamma.hpp"
#include "lastrec/quadrature.hpp"

namespace lastrec {
namespace {

void check_args(double s, double t) {
  if (!(s > 0.0)) throw std::invalid_argument("uniform case: requires s > 0");
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("uniform case: requires t in [0,1]");
}

constexpr double kEndpoint = 1e-6;

// Gamma(0, a, b) = E1(a) - E1(b), with b possibly infinite
double gamma0(double a, double b) {
  if (std::isinf(b)) return exponential_integral_e1(a);
  if (b <= a) return 0.0;
  return exponential_integral_e1(a) - exponential_integral_e1(b);
}

}  // namespace

double stop_time_cdf(double s, double t) {
  check_args(s, t);
  if (t < kEndpoint) {
    // series: s t + s(1-s) t^2 / 2 + O(t^3)
    return s * t + 0.5 * s * (1.0 - s) * t * t;
  }
  const double ratio = t < 1.0 ? s * t / (1.0 - t) : kInfinity;
  return (t - 1.0) / t * (std::exp(-t * s) - std::exp(-ratio)) + s * gamma0(s * t, ratio) + 1.0 -
         std::exp(-s * t);
}

double stop_time_density(double s, double t) {
  check_args(s, t);
  // d/dt of the distribution function collapses to (e^{-st} - e^{-st/(1-t)})/t^2
  if (t < kEndpoint) {
    return s * (1.0 + t * (1.0 - s));  // series at 0
  }
  if (t == 1.0) return std::exp(-s);
  const double u = s * t * t / (1.0 - t);
  return std::exp(-s * t) * (-std::expm1(-u)) / (t * t);
}

double winning_rate(double s, double t) {
  check_args(s, t);
  if (t < kEndpoint) {
    return (1.0 - std::exp(-s)) * (1.0 + t * (1.0 - s));
  }
  if (1.0 - t < kEndpoint) {
    return std::exp(-s) * (1.0 + (1.0 - t) * (1.0 + 0.5 * s));
  }
  const double om = 1.0 - t;
  return -std::exp(-s) + (std::exp(-s * t) - std::exp(-s * t / om)) / t +
         (std::exp(-s * t) - t * std::exp(-s)) / om +
         s / om * (gamma0(s, s / om) - gamma0(s * t, s * t / om));
}

WinRateCurve winning_rate_curve(double s, int n) {
  if (n < 1) throw std::invalid_argument("winning_rate_curve: requires n >= 1");
  WinRateCurve curve;
  curve.s = s;
  curve.t_grid.reserve(n + 1);
  curve.w_values.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    curve.t_grid.push_back(t);
    curve.w_values.push_back(winning_rate(s, t));
  }
  return curve;
}

}  // namespace lastrec
