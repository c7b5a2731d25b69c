#include "lastrec/incomplete_gamma.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lastrec/quadrature.hpp"

namespace lastrec {
namespace {

constexpr double kEulerGamma = 0.5772156649015328606065120900824024;

bool is_integer(double a) { return a == std::floor(a); }

// E1 by power series, x in (0, 1.5]:
//   E1(x) = -gamma - log x + sum_{n>=1} (-1)^{n+1} x^n / (n n!)
double e1_series(double x) {
  double sum = 0.0;
  double term = 1.0;
  for (int n = 1; n < 80; ++n) {
    term *= -x / n;
    const double add = -term / n;
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(x) + sum;
}

// Legendre continued fraction for Gamma(a, x, inf), x > 0, by modified Lentz.
// Reliable for x not too small relative to |a|; callers gate on that.
bool upper_gamma_cf(double a, double x, double& out) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / (b == 0.0 ? tiny : b);
  double h = d;
  for (int i = 1; i <= 100000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) {
      const double lead = std::exp(-x + a * std::log(x));
      if (!std::isfinite(lead)) return false;
      out = lead * h;
      return true;
    }
  }
  return false;
}

// Lower incomplete gamma by series, a > 0:
//   gamma(a, x) = x^a e^{-x} * lower_gamma_scaled(a, x)
bool lower_gamma_series(double a, double x, double& out) {
  const double scaled = lower_gamma_scaled(a, x);
  const double lead = std::exp(-x + a * std::log(x));
  if (!std::isfinite(lead)) return false;
  out = lead * scaled;
  return true;
}

// E_{n+1} chain from E1; stable upward for x below ~1.5.
double upper_gamma_negative_integer(int n, double x) {
  double e = exponential_integral_e1(x);  // E_1
  const double ex = std::exp(-x);
  for (int k = 1; k <= n; ++k) e = (ex - x * e) / k;  // E_{k+1}
  return std::pow(x, -n) * e;
}

double quadrature_fallback(double a, double b, double c) {
  const auto integrand = [a](double t) { return std::exp(-t + (a - 1.0) * std::log(t)); };
  QuadratureOptions opt;
  opt.atol = 1e-15;
  opt.rtol = 1e-11;
  return integrate(integrand, b, c, opt).value;
}

// Gamma(a, x, inf) for x > 0.
double upper_gamma(double a, double x) {
  if (a == 0.0) return exponential_integral_e1(x);

  double result = 0.0;
  if (x >= std::max(1.5, a + 1.0)) {
    if (upper_gamma_cf(a, x, result)) return result;
    return quadrature_fallback(a, x, kInfinity);
  }

  if (a > 0.0) {
    const double whole = std::tgamma(a);
    double lower = 0.0;
    if (std::isfinite(whole) && lower_gamma_series(a, x, lower)) {
      const double diff = whole - lower;
      if (diff > 1e-3 * whole) return diff;  // cancellation-safe region
    }
    return quadrature_fallback(a, x, kInfinity);
  }

  // a < 0, x < max(1.5, a+1)
  if (is_integer(a) && -a < 1e6) return upper_gamma_negative_integer(static_cast<int>(-a), x);

  // reflection: Gamma(a) finite for non-integer a < 0, and the alternating
  // series gamma(a,x) = x^a sum_n (-x)^n / (n! (a+n)) converges fast here
  const double whole = std::tgamma(a);
  double series = 0.0;
  double term = 1.0;  // (-x)^n / n!
  for (int n = 0; n < 200; ++n) {
    const double add = term / (a + n);
    series += add;
    term *= -x / (n + 1);
    if (std::abs(term / (a + n + 1)) < 1e-17 * std::abs(series)) break;
  }
  const double lower = std::pow(x, a) * series;
  const double diff = whole - lower;
  if (std::isfinite(diff) && std::abs(diff) > 1e-5 * (std::abs(whole) + std::abs(lower))) {
    return diff;
  }
  return quadrature_fallback(a, x, kInfinity);
}

}  // namespace

double lower_gamma_scaled(double a, double x) {
  if (a <= 0.0) throw std::domain_error("lower_gamma_scaled: requires a > 0");
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

double exponential_integral_e1(double x) {
  if (!(x > 0.0)) throw std::domain_error("exponential_integral_e1: requires x > 0");
  if (x <= 1.5) return e1_series(x);
  double cf = 0.0;
  if (upper_gamma_cf(0.0, x, cf)) return cf;
  return quadrature_fallback(0.0, x, kInfinity);
}

double incomplete_gamma(double a, double b, double c) {
  if (std::isnan(a) || std::isnan(b) || std::isnan(c))
    throw std::domain_error("incomplete_gamma: NaN argument");
  if (b < 0.0) throw std::domain_error("incomplete_gamma: requires b >= 0");
  if (c < b) throw std::domain_error("incomplete_gamma: requires c >= b");
  if (c == b) return 0.0;

  if (b == 0.0) {
    if (a <= 0.0)
      throw std::domain_error("incomplete_gamma: divergent at 0 for a <= 0");
    if (std::isinf(c)) return std::tgamma(a);
    double lower = 0.0;
    if (lower_gamma_series(a, c, lower)) return lower;
    // x^a under/overflowed: substitute the singularity away via t = u^{1/a}
    const double inv_a = 1.0 / a;
    QuadratureOptions opt;
    opt.atol = 1e-15;
    opt.rtol = 1e-11;
    const auto g = [inv_a](double u) { return inv_a * std::exp(-std::pow(u, inv_a)); };
    return integrate(g, 0.0, std::pow(c, a), opt).value;
  }

  if (std::isinf(c)) return upper_gamma(a, b);

  const double ub = upper_gamma(a, b);
  const double uc = upper_gamma(a, c);
  const double diff = ub - uc;
  if (std::isfinite(diff) && diff >= 0.0 && (uc == 0.0 || diff > 0.05 * ub)) return diff;
  // nearly equal tails (c close to b): direct quadrature avoids cancellation
  return quadrature_fallback(a, b, c);
}

}  // namespace lastrec
