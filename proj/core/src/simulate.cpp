#include "lastrec/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace lastrec {
namespace {

constexpr std::int64_t kMaxRecordsPerPath = 10'000'000;

int resolve_workers(int requested, std::int64_t replicates) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (replicates < 4 * n) n = 1;  // not worth spinning threads up
  return n;
}

struct Tally {
  std::int64_t successes = 0;
  std::int64_t non_stops = 0;
};

SimReport make_report(const Tally& tally, std::int64_t replicates, std::uint64_t seed) {
  SimReport report;
  report.replicates = replicates;
  report.seed = seed;
  const double n = static_cast<double>(replicates);
  report.estimate = static_cast<double>(tally.successes) / n;
  report.std_error = std::sqrt(report.estimate * (1.0 - report.estimate) / n);
  report.non_stop_fraction = static_cast<double>(tally.non_stops) / n;
  return report;
}

enum class PolicyMode { b_threshold, weight_threshold, time_threshold };

struct PolicyParams {
  PolicyMode mode;
  double param;
};

PolicyParams unpack(const Policy& policy) {
  if (const auto* b = std::get_if<BThreshold>(&policy)) {
    if (!(b->s > 0.0)) throw std::invalid_argument("BThreshold: requires s > 0");
    return {PolicyMode::b_threshold, b->s};
  }
  if (const auto* w = std::get_if<WeightThreshold>(&policy)) {
    if (!(w->w > 0.0)) throw std::invalid_argument("WeightThreshold: requires w > 0");
    return {PolicyMode::weight_threshold, w->w};
  }
  const auto& t = std::get<TimeThreshold>(policy);
  if (!(t.t0 >= 0.0)) throw std::invalid_argument("TimeThreshold: requires t0 >= 0");
  return {PolicyMode::time_threshold, t.t0};
}

// Walks one replicate; returns {stopped, success}.
std::pair<bool, bool> run_replicate(const SimConfig& config, const PolicyParams& policy,
                                    RngStream& rng) {
  const double horizon = config.horizon;
  double t = 0.0;
  double w = config.r0;
  bool stopped = false;
  for (std::int64_t records = 0; records <= kMaxRecordsPerPath; ++records) {
    t += rng.exponential() / w;
    if (t >= horizon) return {stopped, stopped};  // no further record: stop wins
    if (stopped) return {true, false};            // a record after the stop
    w *= config.dist.sample(rng);
    bool qualifies = false;
    switch (policy.mode) {
      case PolicyMode::b_threshold:
        qualifies = (horizon - t) * w <= policy.param;
        break;
      case PolicyMode::weight_threshold:
        qualifies = w <= policy.param;
        break;
      case PolicyMode::time_threshold:
        qualifies = t > policy.param;
        break;
    }
    if (qualifies) stopped = true;
  }
  throw std::runtime_error("evaluate_policy: replicate exceeded 1e7 records");
}

template <typename PerReplicate>
Tally parallel_tally(std::int64_t replicates, int workers, PerReplicate&& body) {
  if (workers <= 1) {
    Tally tally;
    for (std::int64_t i = 0; i < replicates; ++i) body(i, tally);
    return tally;
  }
  std::vector<Tally> partial(workers);
  std::vector<std::thread> threads;
  std::atomic<std::int64_t> next{0};
  constexpr std::int64_t kChunk = 4096;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (;;) {
        const std::int64_t begin = next.fetch_add(kChunk);
        if (begin >= replicates) break;
        const std::int64_t end = std::min(begin + kChunk, replicates);
        for (std::int64_t i = begin; i < end; ++i) body(i, partial[w]);
      }
    });
  }
  for (auto& th : threads) th.join();
  Tally tally;
  for (const auto& p : partial) {
    tally.successes += p.successes;
    tally.non_stops += p.non_stops;
  }
  return tally;
}

}  // namespace

SimPath simulate_path(const SimConfig& config, RngStream& rng) {
  if (!(config.r0 > 0.0)) throw std::invalid_argument("simulate_path: requires r0 > 0");
  if (!(config.horizon > 0.0)) throw std::invalid_argument("simulate_path: requires horizon > 0");

  SimPath path;
  path.horizon = config.horizon;
  path.initial_state = config.r0;
  double t = 0.0;
  double w = config.r0;
  for (std::int64_t records = 0; records <= kMaxRecordsPerPath; ++records) {
    t += rng.exponential() / w;
    if (t >= config.horizon) return path;
    w *= config.dist.sample(rng);
    path.record_times.push_back(t);
    path.record_weights.push_back(w);
  }
  throw std::runtime_error("simulate_path: path exceeded 1e7 records");
}

SimReport evaluate_policy(const SimConfig& config, const Policy& policy) {
  if (config.replicates < 1)
    throw std::invalid_argument("evaluate_policy: requires replicates >= 1");
  if (!(config.r0 > 0.0 && config.horizon > 0.0))
    throw std::invalid_argument("evaluate_policy: requires r0 > 0 and horizon > 0");
  const PolicyParams params = unpack(policy);
  const int workers = resolve_workers(config.workers, config.replicates);

  const Tally tally = parallel_tally(
      config.replicates, workers, [&](std::int64_t i, Tally& out) {
        RngStream rng(config.seed, static_cast<std::uint64_t>(i));
        const auto [stopped, success] = run_replicate(config, params, rng);
        if (success) ++out.successes;
        if (!stopped) ++out.non_stops;
      });
  return make_report(tally, config.replicates, config.seed);
}

SimPath simulate_entrance(const FactorDistribution& dist, double r0_large, RngStream& rng) {
  if (dist.has_lattice_support())
    throw std::domain_error(
        "simulate_entrance: law supported by a geometric progression (" + dist.description() +
        ") violates the entrance hypotheses");
  if (!(r0_large >= 1e6))
    throw std::invalid_argument("simulate_entrance: requires r0 >= 1e6");
  SimConfig config;
  config.dist = dist;
  config.r0 = r0_large;
  config.horizon = 1.0;
  return simulate_path(config, rng);
}

SimReport evaluate_discrete(const FactorDistribution& dist, std::int64_t n, double policy_s,
                            std::int64_t replicates, std::uint64_t seed, int workers) {
  if (n < 1) throw std::invalid_argument("evaluate_discrete: requires n >= 1");
  if (replicates < 1) throw std::invalid_argument("evaluate_discrete: requires replicates >= 1");
  if (!(policy_s > 0.0)) throw std::invalid_argument("evaluate_discrete: requires s > 0");
  if (dist.kind() == FactorKind::Delta && dist.param() == 1.0)
    throw std::domain_error(
        "evaluate_discrete: delta:1 keeps every weight at 1; the geometric-duration model "
        "needs record weights below 1");

  const int nworkers = resolve_workers(workers, replicates);
  const Tally tally = parallel_tally(replicates, nworkers, [&](std::int64_t i, Tally& out) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    // the first observation is a record at index 1 with weight X_1
    std::int64_t j = 1;
    double w = dist.sample(rng);
    for (;;) {
      const std::int64_t remaining = n - j;
      if (w * static_cast<double>(remaining) <= policy_s) {
        // stopped here; wins iff no further record among the remaining draws
        if (rng.geometric(w) > static_cast<std::uint64_t>(remaining)) ++out.successes;
        return;
      }
      const std::uint64_t gap = rng.geometric(w);
      if (gap > static_cast<std::uint64_t>(remaining)) {
        ++out.non_stops;  // the record at j was the last, but the policy never stopped
        return;
      }
      j += static_cast<std::int64_t>(gap);
      w *= dist.sample(rng);
    }
  });
  return make_report(tally, replicates, seed);
}

}  // namespace lastrec
