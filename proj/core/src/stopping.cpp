#include "lastrec/stopping.hpp"

#include <cmath>
#include <stdexcept>

#include "lastrec/root_finding.hpp"
#include "lastrec/simulate.hpp"

namespace lastrec {
namespace {

// E[(e^{s(1-X)} - 1)/(1-X)]
double one_record_expectation(const FactorDistribution& dist, double s) {
  return dist.expect([s](double x) { return one_record_integrand(s, x); });
}

}  // namespace

double one_record_integrand(double s, double x) {
  const double u = 1.0 - x;
  if (u < 1e-8) {
    // series s + s^2 u / 2 + s^3 u^2 / 6; u <= 1e-8 makes two terms exact
    return s * (1.0 + 0.5 * s * u * (1.0 + s * u / 3.0));
  }
  return std::expm1(s * u) / u;
}

double p0(double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("p0: requires s >= 0");
  return std::exp(-s);
}

double p1(const FactorDistribution& dist, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("p1: requires s >= 0");
  if (s == 0.0) return 0.0;
  return std::exp(-s) * one_record_expectation(dist, s);
}

ThresholdResult solve_threshold(const FactorDistribution& dist) {
  ThresholdResult result;
  result.dist_description = dist.description();

  if (dist.kind() == FactorKind::Delta && dist.param() == 1.0) {
    // E[(e^{s(1-X)}-1)/(1-X)] = s, so the root is exactly 1
    result.s_star = 1.0;
    result.residual = 0.0;
    result.bracket_width = 0.0;
    return result;
  }

  const auto residual = [&dist](double s) { return one_record_expectation(dist, s) - 1.0; };
  RootOptions opt;
  opt.xtol = 1e-12;
  const double root = find_root(residual, 1e-8, 1.0, opt);
  result.s_star = root;
  result.residual = residual(root);
  result.bracket_width = opt.xtol;
  return result;
}

double embedded_step(double s, const FactorDistribution& dist, RngStream& rng) {
  if (!(s >= 0.0)) throw std::invalid_argument("embedded_step: requires s >= 0");
  if (s == 0.0) return 0.0;  // absorbing
  const double e = rng.exponential();
  if (e >= s) return 0.0;
  return (s - e) * dist.sample(rng);
}

EntranceLaw entrance_moments(const FactorDistribution& dist, int k_max) {
  if (k_max < 1) throw std::invalid_argument("entrance_moments: requires K >= 1");
  if (dist.has_lattice_support())
    throw std::domain_error(
        "entrance_moments: law supported by a geometric progression (" + dist.description() +
        ") violates the entrance hypotheses");
  const double mean_log = dist.mean_abs_log();

  EntranceLaw law;
  law.dist_description = dist.description();
  law.moments.reserve(k_max);
  double prod = 1.0;  // prod_{j=1}^{k-1} j / (1 - f(j))
  for (int k = 1; k <= k_max; ++k) {
    if (k > 1) {
      const double j = k - 1.0;
      prod *= j / (1.0 - dist.mellin(j));
    }
    law.moments.push_back(prod / mean_log);
  }
  return law;
}

Tau1Cdf tau1_cdf(const EntranceLaw& entrance, const FactorDistribution& dist, double t,
                 const Tau1Options& opt) {
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("tau1_cdf: requires t in (0,1]");
  if (entrance.moments.empty())
    throw std::invalid_argument("tau1_cdf: entrance law has no moments");

  Tau1Cdf out;
  if (t == 1.0) {
    out.value = 1.0;
    return out;
  }
  const double lambda = 1.0 / t - 1.0;
  switch (dist.kind()) {
    case FactorKind::Uniform:
      // Y ~ Exp(1): E[e^{-lambda Y}] = 1/(1+lambda) = t
      out.value = 1.0 / (1.0 + lambda);
      return out;
    case FactorKind::Beta:
      // Y ~ Gamma(theta): (1+lambda)^{-theta} = t^theta
      out.value = std::pow(1.0 + lambda, -dist.param());
      return out;
    default:
      break;
  }

  // no closed Laplace transform registered: estimate P(tau_1 < t) from
  // simulated entrance paths and flag the result as such
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < opt.replicates; ++i) {
    RngStream rng(opt.seed, static_cast<std::uint64_t>(i));
    const SimPath path = simulate_entrance(dist, opt.r0, rng);
    if (!path.record_times.empty() && path.record_times.back() < t) ++hits;
  }
  const double n = static_cast<double>(opt.replicates);
  out.value = hits / n;
  out.simulated = true;
  out.std_error = std::sqrt(out.value * (1.0 - out.value) / n);
  return out;
}

}  // namespace lastrec
