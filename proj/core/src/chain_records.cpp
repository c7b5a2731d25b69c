#include "lastrec/chain_records.hpp"

#include <cmath>
#include <stdexcept>

namespace lastrec {
namespace {

struct CubeMark {
  double coords[16];
};

// length of a random interval: Beta(alpha-1, 2), CDF F(x) = alpha x^{alpha-1}
// - (alpha-1) x^alpha, sampled by monotone bisection
double sample_interval_length(double alpha, RngStream& rng) {
  const double u = rng.uniform();
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double cdf = alpha * std::pow(mid, alpha - 1.0) - (alpha - 1.0) * std::pow(mid, alpha);
    (cdf < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> chain_records_cube(int d, std::int64_t n_samples, RngStream& rng) {
  if (d < 1 || d > 16) throw std::invalid_argument("cube space: requires 1 <= d <= 16");
  std::vector<double> weights;
  CubeMark last{};
  bool have_chain = false;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    CubeMark mark;
    for (int k = 0; k < d; ++k) mark.coords[k] = rng.uniform();
    bool joins = true;
    if (have_chain) {
      for (int k = 0; k < d; ++k) {
        if (!(mark.coords[k] < last.coords[k])) {
          joins = false;
          break;
        }
      }
    }
    if (joins) {
      last = mark;
      have_chain = true;
      double w = 1.0;
      for (int k = 0; k < d; ++k) w *= mark.coords[k];
      weights.push_back(w);
    }
  }
  return weights;
}

std::vector<double> chain_records_interval(double alpha, std::int64_t n_samples, RngStream& rng) {
  if (!(alpha > 1.0)) throw std::invalid_argument("interval space: requires alpha > 1");
  std::vector<double> weights;
  double last_a = 0.0, last_b = 1.0;
  bool have_chain = false;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const double len = sample_interval_length(alpha, rng);
    const double a = (1.0 - len) * rng.uniform();
    const double b = a + len;
    const bool joins = !have_chain || (last_a < a && b < last_b);
    if (joins) {
      last_a = a;
      last_b = b;
      have_chain = true;
      weights.push_back(std::pow(len, alpha));
    }
  }
  return weights;
}

}  // namespace

ChainSpace parse_chain_space(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon != std::string_view::npos) {
    const std::string head(spec.substr(0, colon));
    const std::string arg(spec.substr(colon + 1));
    try {
      if (head == "cube") return CubeSpace{std::stoi(arg)};
      if (head == "interval") return IntervalOrderSpace{std::stod(arg)};
    } catch (const std::exception&) {
      // fall through to the common error below
    }
  }
  throw std::invalid_argument("unknown space spec '" + std::string(spec) +
                              "'; valid: cube:<d> | interval:<alpha>");
}

std::string describe(const ChainSpace& space) {
  if (const auto* cube = std::get_if<CubeSpace>(&space))
    return "cube:" + std::to_string(cube->d);
  const auto& iv = std::get<IntervalOrderSpace>(space);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "interval:%g", iv.alpha);
  return buf;
}

std::vector<double> sample_chain_records(const ChainSpace& space, std::int64_t n_samples,
                                         RngStream& rng) {
  if (n_samples < 1) throw std::invalid_argument("sample_chain_records: requires n >= 1");
  if (const auto* cube = std::get_if<CubeSpace>(&space))
    return chain_records_cube(cube->d, n_samples, rng);
  const auto& iv = std::get<IntervalOrderSpace>(space);
  return chain_records_interval(iv.alpha, n_samples, rng);
}

std::vector<double> chain_record_ratios(const ChainSpace& space, std::int64_t n_ratios,
                                        std::int64_t batch_size, std::uint64_t seed) {
  std::vector<double> ratios;
  ratios.reserve(n_ratios);
  std::uint64_t batch = 0;
  while (static_cast<std::int64_t>(ratios.size()) < n_ratios) {
    RngStream rng(seed, batch++);
    const auto weights = sample_chain_records(space, batch_size, rng);
    for (std::size_t i = 1; i < weights.size(); ++i) {
      ratios.push_back(weights[i] / weights[i - 1]);
      if (static_cast<std::int64_t>(ratios.size()) == n_ratios) break;
    }
    if (batch > 100 * static_cast<std::uint64_t>(n_ratios) + 1000)
      throw std::runtime_error("chain_record_ratios: batches yield too few records");
  }
  return ratios;
}

}  // namespace lastrec
