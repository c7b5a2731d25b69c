#include "lastrec/value.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lastrec/incomplete_gamma.hpp"
#include "lastrec/quadrature.hpp"
#include "lastrec/stopping.hpp"

namespace lastrec {
namespace {

// ---------------------------------------------------------------- beta case

// S1(theta, s) = sum_{n>=1} s^n / (n prod_{j=1}^{n-1} (theta+j))
//              = E[(e^{s(1-X)} - 1)/(1-X)] for X ~ beta(theta,1)
double beta_one_record_series(double theta, double s) {
  double sum = 0.0;
  double prod = 1.0;
  double spow = 1.0;
  for (int n = 1; n < 4000; ++n) {
    spow *= s;
    const double term = spow / (n * prod);
    sum += term;
    if (term < 1e-17 * (1.0 + sum)) break;
    prod *= (theta + n);
  }
  return sum;
}

double p1_beta(double theta, double s) {
  if (s <= 0.0) return 0.0;
  return std::exp(-s) * beta_one_record_series(theta, s);
}

// E[e^{-sX}] and E[X e^{-sX}] for X ~ beta(theta,1), in underflow-safe form.
double beta_laplace(double theta, double s) {
  return theta * std::exp(-s) * lower_gamma_scaled(theta, s);
}
double beta_laplace_x(double theta, double s) {
  return theta * std::exp(-s) * lower_gamma_scaled(theta + 1.0, s);
}

// s^theta Gamma(1-theta, s, T) = int_s^T e^{-t} (s/t)^theta dt, stable for any
// theta since the integrand never exceeds e^{-t}.
double scaled_tail_integral(double theta, double s, double T) {
  if (theta <= 50.0) {
    const double direct = incomplete_gamma(1.0 - theta, s, T) * std::pow(s, theta);
    if (std::isfinite(direct)) return direct;
  }
  QuadratureOptions opt;
  opt.atol = 1e-15;
  opt.rtol = 1e-11;
  const double log_s = std::log(s);
  const auto h = [theta, log_s](double t) {
    return std::exp(-t + theta * (log_s - std::log(t)));
  };
  return integrate(h, s, T, opt).value;
}

// ----------------------------------------------------- Chebyshev panel tools

constexpr int kChebNodes = 33;  // Lobatto points per delta interval

struct ChebPanel {
  double a = 0.0, b = 0.0;
  std::vector<double> t;  // ascending nodes
  std::vector<double> v;

  double eval(double x) const {
    // barycentric interpolation, Lobatto weights (-1)^j (halved at the ends)
    double num = 0.0, den = 0.0;
    const int n = static_cast<int>(t.size()) - 1;
    for (int j = 0; j <= n; ++j) {
      const double diff = x - t[j];
      if (diff == 0.0) return v[j];
      double w = (j % 2 == 0) ? 1.0 : -1.0;
      if (j == 0 || j == n) w *= 0.5;
      const double q = w / diff;
      num += q * v[j];
      den += q;
    }
    return num / den;
  }
};

std::vector<double> lobatto_nodes(double a, double b) {
  std::vector<double> t(kChebNodes);
  const int n = kChebNodes - 1;
  for (int j = 0; j <= n; ++j) {
    const double c = std::cos(M_PI * static_cast<double>(n - j) / n);  // ascending
    t[j] = 0.5 * (a + b) + 0.5 * (b - a) * c;
  }
  t.front() = a;
  t.back() = b;
  return t;
}

// ------------------------------------------------------------- delay ODE

// cubic Hermite with one-sided nodal slopes and Fritsch-Carlson limiting
// (a no-op on smooth monotone data, where the exact slopes already satisfy
// the monotonicity constraint)
double hermite_eval(const std::vector<double>& t, const std::vector<double>& v,
                    const std::vector<double>& d_left, const std::vector<double>& d_right,
                    double tau) {
  const auto it = std::upper_bound(t.begin(), t.end(), tau);
  const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
  const double h = t[i + 1] - t[i];
  const double sec = (v[i + 1] - v[i]) / h;
  double d0 = d_right[i], d1 = d_left[i + 1];
  if (sec == 0.0) {
    d0 = d1 = 0.0;
  } else {
    if (d0 * sec < 0.0)
      d0 = 0.0;
    else if (std::abs(d0) > 3.0 * std::abs(sec))
      d0 = 3.0 * sec;
    if (d1 * sec < 0.0)
      d1 = 0.0;
    else if (std::abs(d1) > 3.0 * std::abs(sec))
      d1 = 3.0 * sec;
  }
  const double u = (tau - t[i]) / h;
  const double u2 = u * u;
  const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
  const double h10 = u * (1.0 - u) * (1.0 - u);
  const double h01 = u2 * (3.0 - 2.0 * u);
  const double h11 = u2 * (u - 1.0);
  return h00 * v[i] + h * h10 * d0 + h01 * v[i + 1] + h * h11 * d1;
}

struct MarchGrid {
  std::vector<double> t, v, d_left, d_right;

  // linear lookahead for stage lookups past the last committed node
  double ext_slope = 0.0;

  std::size_t size() const { return t.size(); }

  void push(double tt, double vv, double dl, double dr) {
    t.push_back(tt);
    v.push_back(vv);
    d_left.push_back(dl);
    d_right.push_back(dr);
  }

  double eval(double tau) const {
    if (tau >= t.back()) return v.back() + (tau - t.back()) * ext_slope;
    if (tau <= t.front()) return v.front();
    return hermite_eval(t, v, d_left, d_right, tau);
  }
};

struct DelayOdeProblem {
  const FactorDistribution& dist;
  double s;
  std::vector<Atom> atom_list;  // empty for continuous laws
  bool atomic = false;

  explicit DelayOdeProblem(const FactorDistribution& d, double s_)
      : dist(d), s(s_), atom_list(d.atoms()), atomic(d.is_atomic()) {}

  // F(T) = E[v(TX) 1(TX>s)] + E[e^{-TX} 1(TX<=s)]; atoms are classified once
  // per step (branch_ref = step midpoint) so no stage straddles a breakpoint.
  double forcing(double T, const MarchGrid& grid, double branch_ref) const {
    if (atomic) {
      double f = 0.0;
      for (const auto& a : atom_list) {
        f += a.mass *
             (a.x * branch_ref > s ? grid.eval(T * a.x) : std::exp(-T * a.x));
      }
      return f;
    }
    const double cut = std::min(s / T, 1.0);
    double f = dist.expect_between([&](double x) { return std::exp(-T * x); }, 0.0, cut);
    if (cut < 1.0) {
      f += dist.expect_between([&](double x) { return grid.eval(T * x); }, cut, 1.0);
    }
    return f;
  }

  double rhs(double T, double vT, const MarchGrid& grid, double branch_ref) const {
    return -vT + forcing(T, grid, branch_ref);
  }
};

// breakpoints of the delayed term for atomic laws: s / a^k closures
std::vector<double> atomic_breakpoints(const FactorDistribution& dist, double s, double t_max) {
  std::vector<double> points;
  if (!dist.is_atomic()) return points;
  if (dist.kind() == FactorKind::Delta) {
    const double x = dist.param();
    if (x >= 1.0) return points;
    for (double b = s / x; b < t_max; b /= x) {
      points.push_back(b);
      if (points.size() > 100000) throw std::runtime_error("delay ODE: breakpoint explosion");
    }
    return points;
  }
  if (dist.kind() == FactorKind::GeometricAtoms) {
    const double q = 1.0 - dist.param();
    for (double b = s / q; b < t_max; b /= q) {
      points.push_back(b);
      if (points.size() > 100000) throw std::runtime_error("delay ODE: breakpoint explosion");
    }
    return points;
  }
  // custom atom lists: closure of s / prod(atoms) below t_max
  std::vector<double> frontier{s};
  std::vector<double> seen;
  while (!frontier.empty()) {
    const double base = frontier.back();
    frontier.pop_back();
    for (const auto& a : dist.atoms()) {
      if (a.x >= 1.0) continue;
      const double b = base / a.x;
      if (b >= t_max) continue;
      const bool duplicate =
          std::any_of(seen.begin(), seen.end(), [b](double z) { return std::abs(z - b) < 1e-12; });
      if (!duplicate) {
        seen.push_back(b);
        frontier.push_back(b);
        if (seen.size() > 20000) throw std::runtime_error("delay ODE: breakpoint explosion");
      }
    }
  }
  return seen;
}

// one full march at the given target step; nodes returned cover [0, t_max]
MarchGrid march_delay_ode(const FactorDistribution& dist, double s, double t_max, double step) {
  DelayOdeProblem problem(dist, s);
  MarchGrid grid;

  // exact initial segment v = p1 on [0, s], slopes p1' = -p1 + E[e^{-TX}]
  const int n_lo = std::max(4, static_cast<int>(std::ceil(s / step)));
  const double h_lo = s / n_lo;
  for (int j = 0; j <= n_lo; ++j) {
    const double tj = (j == n_lo) ? s : j * h_lo;
    const double vj = p1(dist, tj);
    const double dj =
        -vj + dist.expect([tj](double x) { return std::exp(-tj * x); });
    grid.push(tj, vj, dj, dj);
  }

  // segment boundaries: s, atomic breakpoints, t_max
  std::vector<double> bounds = atomic_breakpoints(dist, s, t_max);
  bounds.push_back(t_max);
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-13; }),
               bounds.end());

  double seg_lo = s;
  for (const double seg_hi : bounds) {
    if (seg_hi <= seg_lo + 1e-13) continue;
    const double branch_ref = 0.5 * (seg_lo + seg_hi);
    const int n_steps = std::max(1, static_cast<int>(std::ceil((seg_hi - seg_lo) / step)));
    const double h = (seg_hi - seg_lo) / n_steps;

    // slope on the right side of the segment entry node
    grid.d_right.back() = problem.rhs(grid.t.back(), grid.v.back(), grid, branch_ref);

    for (int n = 0; n < n_steps; ++n) {
      const double t0 = seg_lo + n * h;
      const double t1 = (n == n_steps - 1) ? seg_hi : t0 + h;
      const double v0 = grid.v.back();
      const double k1 = grid.d_right.back();

      grid.ext_slope = k1;
      const double k2 = problem.rhs(t0 + 0.5 * h, v0 + 0.5 * h * k1, grid, branch_ref);
      grid.ext_slope = k2;
      const double k3 = problem.rhs(t0 + 0.5 * h, v0 + 0.5 * h * k2, grid, branch_ref);
      grid.ext_slope = k3;
      const double k4 = problem.rhs(t1, v0 + h * k3, grid, branch_ref);

      const double v1 = v0 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      grid.push(t1, v1, k4, k4);
      grid.ext_slope = k4;
      const double d1 = problem.rhs(t1, v1, grid, branch_ref);
      grid.d_left.back() = d1;
      grid.d_right.back() = d1;  // re-evaluated on segment change above
    }
    seg_lo = seg_hi;
  }
  grid.ext_slope = grid.d_right.back();
  return grid;
}

}  // namespace

const char* to_string(ValueMethod m) {
  switch (m) {
    case ValueMethod::closed_beta:
      return "closed_beta";
    case ValueMethod::piecewise_delta:
      return "piecewise_delta";
    case ValueMethod::delay_ode:
      return "delay_ode";
  }
  return "unknown";
}

double ValueGrid::interpolate(double T) const {
  if (t_grid.empty()) throw std::logic_error("ValueGrid: empty grid");
  if (T <= t_grid.front()) return v_values.front();
  if (T >= t_grid.back()) return v_values.back();
  return hermite_eval(t_grid, v_values, d_left, d_right, T);
}

double value_beta(double theta, double T, double s) {
  if (!(theta > 0.0)) throw std::invalid_argument("value_beta: requires theta > 0");
  if (!(s > 0.0)) throw std::invalid_argument("value_beta: requires s > 0");
  if (!(T >= 0.0)) throw std::invalid_argument("value_beta: requires T >= 0");
  if (T <= s) return p1_beta(theta, T);

  // v(T,s) = Gamma(1-theta,s,T) e^s s^theta p1'(s) + p1(s), rearranged so the
  // factor s^theta cancels into the tail integral:
  //   e^s s^theta p1'(s) = s^theta [theta lgs(theta,s) - S1(theta,s)]
  const double coeff = theta * lower_gamma_scaled(theta, s) - beta_one_record_series(theta, s);
  return scaled_tail_integral(theta, s, T) * coeff + p1_beta(theta, s);
}

double value_delta(double x, double T, double s) {
  if (!(x > 0.0 && x <= 1.0)) throw std::invalid_argument("value_delta: requires x in (0,1]");
  if (!(s > 0.0)) throw std::invalid_argument("value_delta: requires s > 0");
  if (!(T >= 0.0)) throw std::invalid_argument("value_delta: requires T >= 0");

  if (x == 1.0) {
    const double m = std::min(T, s);
    return m * std::exp(-m);
  }

  const auto p1d = [x](double t) {
    return t <= 0.0 ? 0.0 : (std::exp(-t * x) - std::exp(-t)) / (1.0 - x);
  };
  if (T <= s / x) return p1d(T);

  QuadratureOptions qopt;
  qopt.atol = 1e-14;
  qopt.rtol = 1e-12;

  // v on [s/x^{k-1}, s/x^k] from the integrating factor
  //   v(t) = e^{-(t-a)} v(a) + int_a^t e^{-(t-u)} v_prev(u x) du
  ChebPanel prev;  // k = 1 feeds from p1 directly, not from a panel
  bool have_prev_panel = false;
  double lo = s / x;
  for (int k = 2; k <= 200; ++k) {
    const double hi = lo / x;
    ChebPanel panel;
    panel.a = lo;
    panel.b = hi;
    panel.t = lobatto_nodes(lo, hi);
    panel.v.resize(panel.t.size());

    const auto prev_eval = [&](double u) {
      const double tau = u * x;
      return have_prev_panel ? prev.eval(tau) : p1d(tau);
    };

    double v_acc = have_prev_panel ? prev.eval(lo) : p1d(lo);
    panel.v[0] = v_acc;
    for (std::size_t j = 1; j < panel.t.size(); ++j) {
      const double ta = panel.t[j - 1];
      const double tb = panel.t[j];
      const auto g = [&](double u) { return std::exp(u - tb) * prev_eval(u); };
      v_acc = std::exp(-(tb - ta)) * v_acc + integrate(g, ta, tb, qopt).value;
      panel.v[j] = v_acc;
    }

    if (T <= hi) return panel.eval(T);
    prev = std::move(panel);
    have_prev_panel = true;
    lo = hi;
  }
  throw std::runtime_error("value_delta: horizon needs more than 200 delay intervals");
}

ValueGrid solve_delay_ode(const FactorDistribution& dist, double s, double T_max,
                          double grid_step, const DelayOdeOptions& opt) {
  if (!(s > 0.0)) throw std::invalid_argument("solve_delay_ode: requires s > 0");
  if (!(T_max > s)) throw std::invalid_argument("solve_delay_ode: requires T_max > s");
  if (!(grid_step > 0.0) || T_max / grid_step < 200.0)
    throw std::invalid_argument(
        "solve_delay_ode: grid_step must place at least 200 points on [0, T_max]");

  double h = grid_step;
  MarchGrid coarse = march_delay_ode(dist, s, T_max, h);
  for (int level = 0; level < opt.max_refinements; ++level) {
    MarchGrid fine = march_delay_ode(dist, s, T_max, 0.5 * h);
    double diff = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      if (coarse.t[i] <= s) continue;  // shared exact initial segment
      diff = std::max(diff, std::abs(fine.eval(coarse.t[i]) - coarse.v[i]));
    }
    if (diff <= opt.refine_tol) {
      coarse = std::move(fine);
      break;
    }
    coarse = std::move(fine);
    h *= 0.5;
    if (level == opt.max_refinements - 1)
      throw std::runtime_error("solve_delay_ode: refinement did not reach tolerance");
  }

  ValueGrid out;
  out.s = s;
  out.dist_description = dist.description();
  out.method = ValueMethod::delay_ode;
  out.t_grid = std::move(coarse.t);
  out.v_values = std::move(coarse.v);
  out.d_left = std::move(coarse.d_left);
  out.d_right = std::move(coarse.d_right);
  return out;
}

PolicyValue policy_value(const FactorDistribution& dist, double T, double s) {
  if (!(T > 0.0)) throw std::invalid_argument("policy_value: requires T > 0");
  if (!(s > 0.0)) throw std::invalid_argument("policy_value: requires s > 0");
  PolicyValue out;

  const bool beta_like = dist.kind() == FactorKind::Uniform || dist.kind() == FactorKind::Beta;
  if (beta_like) {
    const double theta = dist.kind() == FactorKind::Uniform ? 1.0 : dist.param();
    out.method = ValueMethod::closed_beta;
    out.value = value_beta(theta, T, s);
    return out;
  }
  if (dist.kind() == FactorKind::Delta && std::isfinite(T)) {
    out.method = ValueMethod::piecewise_delta;
    out.value = value_delta(dist.param(), T, s);
    return out;
  }
  if (std::isinf(T) && dist.has_lattice_support())
    throw std::domain_error(
        "policy_value: T = inf requires the entrance-law hypotheses (lattice-supported laws "
        "do not qualify)");

  out.method = ValueMethod::delay_ode;
  if (std::isfinite(T)) {
    const double step = std::min(0.02, T / 256.0);
    const ValueGrid grid = solve_delay_ode(dist, s, T, step);
    out.value = grid.v_values.back();
    return out;
  }

  const double t_max = std::max(50.0, 20.0 * s);
  const ValueGrid grid = solve_delay_ode(dist, s, t_max, 0.02);
  const double v1 = grid.interpolate(0.75 * t_max);
  const double v2 = grid.interpolate(0.875 * t_max);
  const double v3 = grid.v_values.back();
  const double d1 = v2 - v1;
  const double d2 = v3 - v2;
  double tail = 0.0;
  double bound = std::abs(d2) + 1e-8;
  if (std::abs(d1) > 1e-13) {
    const double ratio = d2 / d1;
    if (ratio > 0.0 && ratio < 0.95) {
      tail = d2 * ratio / (1.0 - ratio);
      bound = 2.0 * std::abs(tail) + 1e-8;
    }
  }
  out.value = v3 + tail;
  out.tail_bound = bound;
  return out;
}

OptimalValue optimal_value(const FactorDistribution& dist, double T) {
  const ThresholdResult thr = solve_threshold(dist);
  const PolicyValue at_star = policy_value(dist, T, thr.s_star);
  OptimalValue out;
  out.s_star = thr.s_star;
  out.value = at_star.value;
  out.method = at_star.method;
  out.tail_bound = at_star.tail_bound;
  return out;
}

double smooth_fit_residual(double theta, double s) {
  if (!(theta > 0.0 && s > 0.0))
    throw std::invalid_argument("smooth_fit_residual: requires theta > 0 and s > 0");
  const double p1v = p1_beta(theta, s);
  const double p1p = -p1v + beta_laplace(theta, s);
  const double p1pp = -p1p - beta_laplace_x(theta, s);
  return s * p1pp + (s + theta) * p1p;
}

}  // namespace lastrec
