#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "lastrec/factor_distribution.hpp"
#include "lastrec/rng.hpp"

namespace lastrec {

/// Root s_* of E[(e^{s(1-X)} - 1)/(1-X)] = 1 with solver diagnostics.
struct ThresholdResult {
  double s_star = 0.0;
  double residual = 0.0;       // E[...] - 1 at s_star
  double bracket_width = 0.0;  // final bracket of the root solve
  std::string dist_description;
};

/// Stop at the first record whose embedded value (T-t) R_t is <= s.
struct BThreshold {
  double s;
};
/// Stop at the first record with weight <= w.
struct WeightThreshold {
  double w;
};
/// Stop at the first record occurring strictly after time t0.
struct TimeThreshold {
  double t0;
};
using Policy = std::variant<BThreshold, WeightThreshold, TimeThreshold>;

/// First K moments E[Y^k] of the entrance-law marginal (R_t = Y/t in law).
struct EntranceLaw {
  std::vector<double> moments;  // index k-1 holds E[Y^k]
  std::string dist_description;
};

/// Probability that no further record occurs from embedded state s: e^{-s}.
double p0(double s);

/// Probability that exactly one further record occurs from embedded state s:
/// p1(s) = e^{-s} E[(e^{s(1-X)} - 1)/(1-X)], the integrand extended by its
/// limit value s at X = 1.
double p1(const FactorDistribution& dist, double s);

/// (e^{s(1-x)} - 1)/(1-x) with the removable singularity at x = 1 filled in.
double one_record_integrand(double s, double x);

/// Unique positive root of the threshold equation, bracketed in (0, 1];
/// returns exactly 1 for the point mass at 1.
ThresholdResult solve_threshold(const FactorDistribution& dist);

/// One transition s -> (s - E)_+ X of the embedded chain at record times.
/// Draws E first; the X draw is skipped once the chain is absorbed at 0.
double embedded_step(double s, const FactorDistribution& dist, RngStream& rng);

/// Moments E[Y^k] = (1/E|log X|) prod_{j=1}^{k-1} j/(1 - f(j)), k = 1..k_max.
/// Rejects laws supported by a geometric progression (Delta, GeometricAtoms).
EntranceLaw entrance_moments(const FactorDistribution& dist, int k_max);

struct Tau1Cdf {
  double value = 0.0;
  bool simulated = false;    // true when no closed Laplace transform is registered
  double std_error = 0.0;    // 0 for the closed-form path
};

struct Tau1Options {
  std::int64_t replicates = 200000;
  std::uint64_t seed = 20260810;
  double r0 = 1e7;  // entrance approximation for the simulated path
};

/// P(tau_1 < t) = E[e^{Y(1 - 1/t)}] under the entrance law, 0 < t <= 1.
/// Closed form for Uniform (= t) and Beta(theta) (= t^theta); every other
/// kind falls back to simulation and is flagged as such.
Tau1Cdf tau1_cdf(const EntranceLaw& entrance, const FactorDistribution& dist, double t,
                 const Tau1Options& opt = {});

}  // namespace lastrec
