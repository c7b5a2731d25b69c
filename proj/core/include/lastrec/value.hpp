#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lastrec/factor_distribution.hpp"

namespace lastrec {

enum class ValueMethod { closed_beta, piecewise_delta, delay_ode };

const char* to_string(ValueMethod m);

/// Tabulated solution v(., s) of the delay equation on a T-grid starting at 0.
/// Below s the values are the exact initial segment v(T, s) = p1(T).
struct ValueGrid {
  double s = 0.0;
  std::vector<double> t_grid;
  std::vector<double> v_values;
  std::string dist_description;
  ValueMethod method = ValueMethod::delay_ode;

  // one-sided slopes per node; the ODE slope jumps at atom breakpoints
  std::vector<double> d_left;
  std::vector<double> d_right;

  /// C^1 cubic-Hermite evaluation (exact nodal slopes, monotone-limited).
  double interpolate(double T) const;
};

/// Closed-form value of policy pi_s for X ~ beta(theta,1); T may be +inf.
/// For T <= s this is p1(T); above s,
///   v(T,s) = Gamma(1-theta, s, T) e^s s^theta p1'(s) + p1(s),
/// with p1'(s) = -p1(s) + theta s^{-theta} Gamma(theta, 0, s).
double value_beta(double theta, double T, double s);

/// Value of pi_s for X ~ delta_x. x = 1 gives (T ^ s) e^{-(T ^ s)}; for x < 1
/// the delay equation is integrated interval by interval over
/// [s/x^{k-1}, s/x^k], each interval represented by a Chebyshev interpolant
/// fed from the previous one. Throws when more than 200 intervals are needed.
double value_delta(double x, double T, double s);

struct DelayOdeOptions {
  double refine_tol = 1e-8;  // sup-norm agreement between successive halvings
  int max_refinements = 4;
};

/// Marching integrator for dv/dT = -v + E[v(TX,s) 1(TX>s)] + E[e^{-TX} 1(TX<=s)]
/// from T = s up to T_max, with the exact initial segment v = p1 on [0, s].
/// Steps are aligned with the breakpoints s/a^k of atomic laws. The grid is
/// accepted once two successive step halvings agree to refine_tol.
ValueGrid solve_delay_ode(const FactorDistribution& dist, double s, double T_max,
                          double grid_step, const DelayOdeOptions& opt = {});

struct PolicyValue {
  double value = 0.0;
  ValueMethod method = ValueMethod::delay_ode;
  /// Present only for T = +inf computed by ODE tail extrapolation.
  std::optional<double> tail_bound;
};

/// v(T, s) by the best available method: closed beta, piecewise delta, or the
/// delay ODE. T = +inf for non-beta laws integrates to max(50, 20 s) and
/// Richardson-extrapolates the tail, reporting the extrapolation bound.
/// Lattice-supported laws are rejected at T = +inf.
PolicyValue policy_value(const FactorDistribution& dist, double T, double s);

struct OptimalValue {
  double value = 0.0;
  double s_star = 0.0;
  ValueMethod method = ValueMethod::delay_ode;
  /// Present only for T = +inf computed by ODE tail extrapolation.
  std::optional<double> tail_bound;
};

/// policy_value at the optimal threshold s_star of the law.
OptimalValue optimal_value(const FactorDistribution& dist, double T);

/// Smooth-fit residual s p1''(s) + (s + theta) p1'(s) for the beta family,
/// from closed-form derivatives of p1. Vanishes exactly at s = s_star.
double smooth_fit_residual(double theta, double s);

}  // namespace lastrec
