#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lastrec/factor_distribution.hpp"
#include "lastrec/quadrature.hpp"
#include "lastrec/simulate.hpp"
#include "lastrec/stopping.hpp"
#include "lastrec/uniform_case.hpp"
#include "lastrec/value.hpp"

using namespace lastrec;

namespace {

double uniform_s_star() {
  static const double s = solve_threshold(FactorDistribution::uniform()).s_star;
  return s;
}

}  // namespace

TEST_CASE("winning_rate: boundary values") {
  const double s = uniform_s_star();
  CHECK(winning_rate(s, 0.0) == doctest::Approx(1.0 - std::exp(-s)).epsilon(1e-9));
  CHECK(winning_rate(s, 1.0) == doctest::Approx(std::exp(-s)).epsilon(1e-9));
  // series endpoints join the direct formula smoothly
  CHECK(winning_rate(s, 1e-6) == doctest::Approx(winning_rate(s, 1.0000001e-6)).epsilon(1e-7));
  CHECK(winning_rate(s, 1.0 - 1e-6) ==
        doctest::Approx(winning_rate(s, 1.0 - 1.0000001e-6)).epsilon(1e-7));
}

TEST_CASE("winning_rate: integrates to the optimal value") {
  const double s = uniform_s_star();
  QuadratureOptions opt;
  opt.atol = 1e-12;
  const double integral = integrate([s](double t) { return winning_rate(s, t); }, 0.0, 1.0, opt).value;
  CHECK(integral == doctest::Approx(value_beta(1.0, kInfinity, s)).epsilon(1e-8));
}

TEST_CASE("winning_rate: interior anchor (pre-build oracle)") {
  const double s = uniform_s_star();
  CHECK(winning_rate(s, 0.5) == doctest::Approx(0.61626305519744).epsilon(1e-9));
}

TEST_CASE("stop_time_density: boundary values and interior anchor") {
  const double s = uniform_s_star();
  CHECK(stop_time_density(s, 0.0) == doctest::Approx(s).epsilon(1e-9));
  CHECK(stop_time_density(s, 1.0) == doctest::Approx(std::exp(-s)).epsilon(1e-12));
  // pre-build oracle value of the closed derivative at t = 0.5
  CHECK(stop_time_density(s, 0.5) == doctest::Approx(0.885941246816).epsilon(1e-9));
}

TEST_CASE("stop_time_cdf: endpoint series joins the gamma form") {
  const double s = uniform_s_star();
  CHECK(stop_time_cdf(s, 0.0) == 0.0);
  CHECK(stop_time_cdf(s, 1e-6) == doctest::Approx(stop_time_cdf(s, 1.01e-6)).epsilon(1e-4));
  CHECK(stop_time_cdf(s, 1.0) == doctest::Approx(0.800494794429).epsilon(1e-9));
}

TEST_CASE("stop_time_density is the derivative of stop_time_cdf") {
  const double s = uniform_s_star();
  QuadratureOptions opt;
  opt.atol = 1e-12;
  for (const double t : {0.15, 0.45, 0.85, 1.0}) {
    const double mass =
        integrate([s](double u) { return stop_time_density(s, u); }, 0.0, t, opt).value;
    CHECK(mass == doctest::Approx(stop_time_cdf(s, t)).epsilon(1e-9));
  }
}

TEST_CASE("total stop mass is 1 - 0.1995") {
  const double s = uniform_s_star();
  QuadratureOptions opt;
  opt.atol = 1e-12;
  const double mass =
      integrate([s](double u) { return stop_time_density(s, u); }, 0.0, 1.0, opt).value;
  CHECK(std::abs(mass - (1.0 - 0.1995)) <= 1e-3);
}

TEST_CASE("winning requires stopping: w <= density pointwise") {
  const double s = uniform_s_star();
  for (int i = 1; i < 40; ++i) {
    const double t = i / 40.0;
    CHECK(winning_rate(s, t) <= stop_time_density(s, t) + 1e-12);
  }
}

TEST_CASE("winning_rate_curve: grid layout") {
  const auto curve = winning_rate_curve(0.8, 10);
  REQUIRE(curve.t_grid.size() == 11);
  CHECK(curve.t_grid.front() == 0.0);
  CHECK(curve.t_grid.back() == 1.0);
  CHECK(curve.w_values.front() == doctest::Approx(1.0 - std::exp(-0.8)).epsilon(1e-9));
}

TEST_CASE("stop-time law matches simulation per bin (entrance regime)") {
  const double s = uniform_s_star();
  const auto uni = FactorDistribution::uniform();
  const int n_paths = 200000;
  const int n_bins = 10;
  std::vector<int> hist(n_bins, 0);
  int stops = 0;
  for (int i = 0; i < n_paths; ++i) {
    RngStream rng(314159, static_cast<std::uint64_t>(i));
    SimConfig config{uni, 1e6, 1.0, 1, 0, 0};
    const auto path = simulate_path(config, rng);
    for (std::size_t j = 0; j < path.record_times.size(); ++j) {
      if ((1.0 - path.record_times[j]) * path.record_weights[j] <= s) {
        ++stops;
        const int bin = std::min(n_bins - 1,
                                 static_cast<int>(path.record_times[j] * n_bins));
        ++hist[bin];
        break;
      }
    }
  }
  QuadratureOptions opt;
  opt.atol = 1e-12;
  for (int b = 0; b < n_bins; ++b) {
    const double lo = static_cast<double>(b) / n_bins;
    const double hi = static_cast<double>(b + 1) / n_bins;
    const double want =
        integrate([s](double u) { return stop_time_density(s, u); }, lo, hi, opt).value;
    const double got = static_cast<double>(hist[b]) / n_paths;
    const double sigma = std::sqrt(want * (1.0 - want) / n_paths);
    CAPTURE(b);
    CHECK(std::abs(got - want) <= 4.0 * sigma);
  }
  // the no-stop mass matches 1 - cdf(1)
  const double no_stop = 1.0 - static_cast<double>(stops) / n_paths;
  const double want_ns = 1.0 - stop_time_cdf(s, 1.0);
  const double sigma_ns = std::sqrt(want_ns * (1.0 - want_ns) / n_paths);
  CHECK(std::abs(no_stop - want_ns) <= 4.0 * sigma_ns);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(winning_rate(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(winning_rate(0.8, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(stop_time_density(0.8, 1.1), std::invalid_argument);
}
