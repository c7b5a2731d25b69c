#pragma once

#include <cstdint>
#include <vector>

#include "lastrec/factor_distribution.hpp"
#include "lastrec/rng.hpp"
#include "lastrec/stopping.hpp"

namespace lastrec {

struct SimConfig {
  FactorDistribution dist;
  double r0 = 1.0;
  double horizon = 1.0;
  std::int64_t replicates = 1;
  std::uint64_t seed = 0;
  int workers = 0;  // 0: one thread per hardware core
};

/// One realisation of the record process on [0, horizon): jump times and the
/// weights taken at those jumps. Weights are strictly decreasing, times
/// strictly increasing and below the horizon.
struct SimPath {
  std::vector<double> record_times;
  std::vector<double> record_weights;
  double horizon = 0.0;
  double initial_state = 0.0;
};

/// Monte Carlo estimate of a Bernoulli success probability. The estimator is
/// independent of worker count: replicate i always consumes stream (seed, i).
struct SimReport {
  double estimate = 0.0;
  double std_error = 0.0;  // sqrt(p(1-p)/n)
  std::int64_t replicates = 0;
  std::uint64_t seed = 0;
  double non_stop_fraction = 0.0;  // replicates where the policy never stopped
};

/// Simulates sojourn/weight pairs until the cumulative time passes the
/// horizon. Aborts a runaway replicate after 10^7 records.
SimPath simulate_path(const SimConfig& config, RngStream& rng);

/// Success probability of a policy under the criterion "the stop is a record
/// time and no further record occurs before the horizon".
SimReport evaluate_policy(const SimConfig& config, const Policy& policy);

/// Entrance-law approximation: a path on horizon 1 started from a large
/// initial state (>= 1e6 enforced). Rejects laws with lattice support.
SimPath simulate_entrance(const FactorDistribution& dist, double r0_large, RngStream& rng);

/// Discrete-time variant with n observations and geometric record durations;
/// evaluates the index policy "stop at the record at index j with weight r
/// when r (n - j) <= s". Rejects the point mass at 1 (every observation
/// would be a record of weight 1).
SimReport evaluate_discrete(const FactorDistribution& dist, std::int64_t n, double policy_s,
                            std::int64_t replicates, std::uint64_t seed, int workers = 0);

}  // namespace lastrec
