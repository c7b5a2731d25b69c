#pragma once

#include <vector>

namespace lastrec {

// Closed-form uniform-factor results for the horizon-1 entrance problem.
// All three functions are pure and hard-coded to theta = 1.

/// Distribution function P(pi_s <= t) of the stopping time of pi_s,
///   ((t-1)/t)(e^{-ts} - e^{-ts/(1-t)}) + s Gamma(0, st, st/(1-t)) + 1 - e^{-st},
/// a sub-probability law: the value at t = 1 is 1 - P(pi_s never stops).
/// Endpoints evaluated by series expansion.
double stop_time_cdf(double s, double t);

/// Density of the stopping time of pi_s on [0,1]; the derivative of the
/// distribution function above collapses to
///   (e^{-st} - e^{-ts/(1-t)}) / t^2,
/// with boundary values s at t = 0 and e^{-s} at t = 1.
double stop_time_density(double s, double t);

/// Winning rate w(t): chance per unit time that pi_s stops at the last
/// record at time t. Boundary values w(0) = 1 - e^{-s}, w(1) = e^{-s};
/// integrates to v(inf, s) over [0,1].
double winning_rate(double s, double t);

struct WinRateCurve {
  double s = 0.0;
  std::vector<double> t_grid;
  std::vector<double> w_values;
};

/// w(.) sampled on the uniform grid t_i = i/n, i = 0..n.
WinRateCurve winning_rate_curve(double s, int n);

}  // namespace lastrec
