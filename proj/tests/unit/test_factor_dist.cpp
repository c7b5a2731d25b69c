#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lastrec/factor_distribution.hpp"
#include "lastrec/quadrature.hpp"
#include "lastrec/stats.hpp"

using namespace lastrec;

namespace {

std::vector<FactorDistribution> builtins() {
  return {FactorDistribution::uniform(),
          FactorDistribution::beta(0.4),
          FactorDistribution::beta(3.0),
          FactorDistribution::delta(0.6),
          FactorDistribution::product_of_uniforms(2),
          FactorDistribution::interval_space(2.0),
          FactorDistribution::geometric_atoms(0.3)};
}

}  // namespace

TEST_CASE("sample: all mass in (0,1]") {
  for (const auto& dist : builtins()) {
    RngStream rng(1, 0);
    bool ok = true;
    for (int i = 0; i < 20000; ++i) {
      const double x = dist.sample(rng);
      ok = ok && x > 0.0 && x <= 1.0;
    }
    CAPTURE(dist.description());
    CHECK(ok);
  }
}

TEST_CASE("sample: delta is constant, beta(1) has uniform mean") {
  RngStream rng(2, 0);
  const auto d = FactorDistribution::delta(0.5);
  for (int i = 0; i < 100; ++i) CHECK(d.sample(rng) == 0.5);

  const auto b1 = FactorDistribution::beta(1.0);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += b1.sample(rng);
  const double stderr_mean = std::sqrt(1.0 / 12.0 / n);
  CHECK(std::abs(sum / n - 0.5) < 3.0 * stderr_mean);
}

TEST_CASE("sample: product of two uniforms matches its CDF x - x log x") {
  RngStream rng(3, 0);
  const auto dist = FactorDistribution::product_of_uniforms(2);
  std::vector<double> draws(1000000);
  for (auto& x : draws) x = dist.sample(rng);
  const double d = ks_statistic(std::move(draws),
                                [](double x) { return x <= 0.0 ? 0.0 : x - x * std::log(x); });
  CHECK(d < 0.002);
}

TEST_CASE("sample: interval space matches its closed CDF") {
  RngStream rng(4, 0);
  const auto dist = FactorDistribution::interval_space(2.0);
  std::vector<double> draws(200000);
  for (auto& x : draws) x = dist.sample(rng);
  const double d =
      ks_statistic(std::move(draws), [](double x) { return 2.0 * std::sqrt(x) - x; });
  CHECK(d < 0.004);
}

TEST_CASE("expect: anchors") {
  CHECK(FactorDistribution::delta(1.0).expect([](double x) { return x; }) == 1.0);
  const auto uni = FactorDistribution::uniform();
  for (int k = 1; k <= 5; ++k) {
    CHECK(uni.expect([k](double x) { return std::pow(x, k); }) ==
          doctest::Approx(1.0 / (k + 1)).epsilon(1e-10));
  }
  for (const double theta : {0.3, 1.7, 6.0}) {
    for (const double lam : {0.5, 2.0}) {
      CHECK(FactorDistribution::beta(theta).expect(
                [lam](double x) { return std::pow(x, lam); }) ==
            doctest::Approx(theta / (theta + lam)).epsilon(1e-9));
    }
  }
}

TEST_CASE("expect_between splits expect") {
  for (const auto& dist : builtins()) {
    const auto g = [](double x) { return std::exp(-2.0 * x) + x; };
    const double whole = dist.expect(g);
    const double split = dist.expect_between(g, 0.0, 0.37) + dist.expect_between(g, 0.37, 1.0);
    CAPTURE(dist.description());
    CHECK(split == doctest::Approx(whole).epsilon(1e-9));
  }
}

TEST_CASE("mellin: f(0) = 1 for every kind") {
  for (const auto& dist : builtins()) {
    CAPTURE(dist.description());
    CHECK(dist.mellin(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("mellin: closed forms") {
  CHECK(FactorDistribution::beta(2.0).mellin(1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(FactorDistribution::product_of_uniforms(3).mellin(1.0) ==
        doctest::Approx(1.0 / 8.0).epsilon(1e-12));
  CHECK(FactorDistribution::delta(0.25).mellin(2.0) == doctest::Approx(0.0625).epsilon(1e-12));
}

TEST_CASE("mellin: closed forms agree with direct expectation") {
  for (const auto& dist : builtins()) {
    for (const double lam : {0.5, 1.0, 3.3}) {
      const double closed = dist.mellin(lam);
      const double direct = dist.expect([lam](double x) { return std::pow(x, lam); });
      CAPTURE(dist.description());
      CHECK(closed == doctest::Approx(direct).epsilon(1e-8));
    }
  }
}

TEST_CASE("mean_abs_log: anchors") {
  CHECK(FactorDistribution::uniform().mean_abs_log() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(FactorDistribution::delta(1.0).mean_abs_log() == 0.0);
  CHECK(FactorDistribution::beta(0.1).mean_abs_log() == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(FactorDistribution::product_of_uniforms(4).mean_abs_log() ==
        doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("mean_abs_log matches the numerical Mellin derivative") {
  const double h = 1e-6;
  for (const auto& dist : builtins()) {
    if (dist.is_atomic()) continue;
    const double numeric = -(dist.mellin(h) - dist.mellin(0.0)) / h;
    CAPTURE(dist.description());
    CHECK(numeric == doctest::Approx(dist.mean_abs_log()).epsilon(1e-4));
  }
}

TEST_CASE("sample/expect consistency over 1e6 draws") {
  const std::vector<std::function<double(double)>> gs = {
      [](double x) { return x; },
      [](double x) { return x * x; },
      [](double x) { return 1.0 / (1.0 - x + 0.1); },
  };
  for (const auto& dist : {FactorDistribution::uniform(), FactorDistribution::beta(2.0),
                           FactorDistribution::geometric_atoms(0.4)}) {
    for (const auto& g : gs) {
      RngStream rng(5, 0);
      const int n = 1000000;
      double sum = 0.0, sum_sq = 0.0;
      for (int i = 0; i < n; ++i) {
        const double v = g(dist.sample(rng));
        sum += v;
        sum_sq += v * v;
      }
      const double mean = sum / n;
      const double se = std::sqrt((sum_sq / n - mean * mean) / n);
      const double want = dist.expect(g);
      CAPTURE(dist.description());
      CHECK(std::abs(mean - want) <= 4.0 * se + 1e-12);
    }
  }
}

TEST_CASE("cdf: closed forms integrate the density") {
  const auto produnif = FactorDistribution::product_of_uniforms(2);
  const auto direct = integrate([](double u) { return -std::log(u); }, 1e-300, 0.3).value;
  CHECK(produnif.cdf(0.3) == doctest::Approx(direct).epsilon(1e-9));

  const auto interval = FactorDistribution::interval_space(3.0);
  const auto dens = [](double x) { return 2.0 * (std::pow(x, -1.0 / 3.0) - 1.0); };
  CHECK(interval.cdf(0.4) == doctest::Approx(integrate(dens, 0.0, 0.4).value).epsilon(1e-9));

  const auto geo = FactorDistribution::geometric_atoms(0.3);
  double acc = 0.0;
  for (const auto& atom : geo.atoms())
    if (atom.x <= 0.5) acc += atom.mass;
  CHECK(geo.cdf(0.5) == doctest::Approx(acc).epsilon(1e-12));
}

TEST_CASE("lower homogeneity: built-ins that arise from ordered spaces pass") {
  const std::vector<double> grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  CHECK(FactorDistribution::uniform().lower_homogeneity_check(grid));
  CHECK(FactorDistribution::product_of_uniforms(2).lower_homogeneity_check(grid));
  CHECK(FactorDistribution::product_of_uniforms(5).lower_homogeneity_check(grid));
  CHECK(FactorDistribution::interval_space(1.5).lower_homogeneity_check(grid));
  CHECK(FactorDistribution::interval_space(4.0).lower_homogeneity_check(grid));
  CHECK(FactorDistribution::geometric_atoms(0.25).lower_homogeneity_check(grid));
  CHECK(FactorDistribution::geometric_atoms(0.7).lower_homogeneity_check(grid));
}

TEST_CASE("lower homogeneity: delta(0.9) fails at 0.5") {
  const std::vector<double> grid = {0.5};
  CHECK_FALSE(FactorDistribution::delta(0.9).lower_homogeneity_check(grid));
}

TEST_CASE("parse: round-trips the canonical specifiers") {
  for (const char* spec : {"uniform", "beta:2", "delta:0.5", "produnif:3", "interval:2",
                           "geomatoms:0.3"}) {
    CHECK(FactorDistribution::parse(spec).description() == spec);
  }
}

TEST_CASE("parse: rejects malformed specs") {
  CHECK_THROWS_AS(FactorDistribution::parse("nosuch"), std::invalid_argument);
  CHECK_THROWS_AS(FactorDistribution::parse("beta"), std::invalid_argument);
  CHECK_THROWS_AS(FactorDistribution::parse("beta:xyz"), std::invalid_argument);
  CHECK_THROWS_AS(FactorDistribution::parse("delta:1.5"), std::invalid_argument);
  CHECK_THROWS_AS(FactorDistribution::parse("produnif:2.5"), std::invalid_argument);
  CHECK_THROWS_AS(FactorDistribution::parse("geomatoms:1"), std::invalid_argument);
}

TEST_CASE("custom kinds support the extension point") {
  const auto tent = FactorDistribution::custom_density(
      [](double x) { return 2.0 * x; }, "custom-2x");
  CHECK(tent.expect([](double x) { return x; }) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(tent.cdf(0.5) == doctest::Approx(0.25).epsilon(1e-9));

  const auto two = FactorDistribution::custom_atoms({{0.25, 0.5}, {0.75, 0.5}}, "custom-pair");
  CHECK(two.mellin(1.0) == doctest::Approx(0.5).epsilon(1e-12));
  RngStream rng(6, 0);
  for (int i = 0; i < 50; ++i) {
    const double x = two.sample(rng);
    CHECK((x == 0.25 || x == 0.75));
  }
}

TEST_CASE("geometric atoms: truncated tail below 1e-14 of total mass") {
  const auto geo = FactorDistribution::geometric_atoms(0.5);
  double mass = 0.0;
  for (const auto& a : geo.atoms()) mass += a.mass;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
}
