#include "lastrec/verification.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "lastrec/chain_records.hpp"
#include "lastrec/factor_distribution.hpp"
#include "lastrec/quadrature.hpp"
#include "lastrec/root_finding.hpp"
#include "lastrec/simulate.hpp"
#include "lastrec/stats.hpp"
#include "lastrec/stopping.hpp"
#include "lastrec/uniform_case.hpp"
#include "lastrec/value.hpp"

namespace lastrec {
namespace {

constexpr std::uint64_t kSeed = 20260810;

struct CheckSet {
  bool passed = true;
  std::ostringstream detail;
  int count = 0;

  void expect(bool ok, const std::string& what) {
    if (count++ > 0) detail << "; ";
    detail << what << (ok ? " ok" : " FAILED");
    passed = passed && ok;
  }

  void expect_close(const std::string& label, double got, double want, double tol) {
    std::ostringstream os;
    os.precision(6);
    os << label << "=" << got << " (want " << want << " +-" << tol << ")";
    expect(std::abs(got - want) <= tol, os.str());
  }
};

CriterionResult run_criterion(int id, const std::string& name,
                              const std::function<void(CheckSet&)>& body) {
  CriterionResult result;
  result.id = id;
  result.name = name;
  const auto start = std::chrono::steady_clock::now();
  CheckSet checks;
  try {
    body(checks);
    result.passed = checks.passed;
    result.detail = checks.detail.str();
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = std::string("exception: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

// ---------------------------------------------------------------- criteria

void theta_table(CheckSet& c) {
  const double thetas[] = {0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 20.0};
  const double ref_s[] = {0.709, 0.731, 0.760, 0.804, 0.857, 0.922, 0.976};
  const double ref_v[] = {0.913, 0.814, 0.703, 0.580, 0.481, 0.410, 0.377};
  double max_ds = 0.0, max_dv = 0.0;
  for (int i = 0; i < 7; ++i) {
    const auto thr = solve_threshold(FactorDistribution::beta(thetas[i]));
    const double v = value_beta(thetas[i], kInfinity, thr.s_star);
    max_ds = std::max(max_ds, std::abs(thr.s_star - ref_s[i]));
    max_dv = std::max(max_dv, std::abs(v - ref_v[i]));
  }
  c.expect_close("max|s_star - table|", max_ds, 0.0, 1e-3);
  c.expect_close("max|v_inf - table|", max_dv, 0.0, 1e-3);
}

void uniform_benchmark(CheckSet& c) {
  const auto uni = FactorDistribution::uniform();
  const auto thr = solve_threshold(uni);
  c.expect_close("s_star", thr.s_star, 0.804, 1e-3);
  const double v_inf = value_beta(1.0, kInfinity, thr.s_star);
  c.expect_close("v_inf", v_inf, 0.580, 1e-3);

  const auto grid = solve_delay_ode(uni, thr.s_star, 50.0, 0.02);
  c.expect_close("|ode(50) - closed|", std::abs(grid.v_values.back() - v_inf), 0.0, 1e-4);

  SimConfig config{uni, 1e6, 1e-2, 1000000, kSeed, 0};
  const auto report = evaluate_policy(config, BThreshold{thr.s_star});
  c.expect_close("|mc - closed|", std::abs(report.estimate - v_inf), 0.0,
                 4.0 * report.std_error);
}

void log_density_case(CheckSet& c) {
  const auto thr = solve_threshold(FactorDistribution::product_of_uniforms(2));
  c.expect_close("s_star", thr.s_star, 0.743, 1e-3);
  c.expect_close("exp(-s_star)", std::exp(-thr.s_star), 0.475, 1e-3);
}

void point_mass_case(CheckSet& c) {
  const double e_inv = std::exp(-1.0);
  bool exact = true;
  for (const double T : {1.0, 1.5, 2.0, 10.0}) exact = exact && (value_delta(1.0, T, 1.0) == e_inv);
  c.expect(exact, "value_delta(1,T,1) == exp(-1) for T >= 1");

  SimConfig config{FactorDistribution::delta(1.0), 1.0, 2.0, 1000000, kSeed + 1, 0};
  const auto report = evaluate_policy(config, BThreshold{1.0});
  c.expect_close("|mc - exp(-1)|", std::abs(report.estimate - e_inv), 0.0,
                 4.0 * report.std_error);
}

void lower_bound_property(CheckSet& c) {
  const double e_inv = std::exp(-1.0);
  RngStream rng(kSeed, 777);
  bool all_below_one = true;
  bool all_above_bound = true;
  for (int i = 0; i < 20; ++i) {
    FactorDistribution dist = FactorDistribution::uniform();
    switch (i % 3) {
      case 0:
        dist = FactorDistribution::beta(std::exp(std::log(0.1) + rng.uniform() * std::log(80.0)));
        break;
      case 1:
        dist = FactorDistribution::delta(0.05 + 0.94 * rng.uniform());
        break;
      default:
        dist = FactorDistribution::product_of_uniforms(1 + static_cast<int>(rng.uniform() * 4));
        break;
    }
    const auto opt = optimal_value(dist, 2.0);
    all_below_one = all_below_one && opt.s_star < 1.0;
    all_above_bound = all_above_bound && opt.value > e_inv;
  }
  c.expect(all_below_one, "s_star < 1 on 20 randomized laws");
  c.expect(all_above_bound, "v(2, s_star) > exp(-1) on 20 randomized laws");

  double prev = 1.0;
  bool monotone = true, above = true;
  for (const double theta : {20.0, 100.0, 1000.0}) {
    const auto opt = optimal_value(FactorDistribution::beta(theta), 2.0);
    monotone = monotone && opt.value < prev;
    above = above && opt.value > e_inv;
    prev = opt.value;
  }
  c.expect(monotone && above, "v(2, s_star) decreases toward exp(-1) over theta=20,100,1000");
}

void entrance_moment_checks(CheckSet& c) {
  const auto uni_law = entrance_moments(FactorDistribution::uniform(), 4);
  double fact = 1.0, max_rel = 0.0;
  for (int k = 1; k <= 4; ++k) {
    fact *= k;
    max_rel = std::max(max_rel, std::abs(uni_law.moments[k - 1] / fact - 1.0));
  }
  c.expect_close("uniform moments vs k!", max_rel, 0.0, 1e-12);

  const auto beta_law = entrance_moments(FactorDistribution::beta(2.0), 4);
  double gk = 1.0;  // Gamma(2+k)/Gamma(2) = (k+1)!
  max_rel = 0.0;
  for (int k = 1; k <= 4; ++k) {
    gk *= (k + 1);
    max_rel = std::max(max_rel, std::abs(beta_law.moments[k - 1] / gk - 1.0));
  }
  c.expect_close("beta(2) moments vs Gamma(2+k)/Gamma(2)", max_rel, 0.0, 1e-12);

  const auto uni = FactorDistribution::uniform();
  std::vector<double> r1;
  r1.reserve(100000);
  for (int i = 0; i < 100000; ++i) {
    RngStream rng(kSeed + 2, static_cast<std::uint64_t>(i));
    const auto path = simulate_entrance(uni, 1e8, rng);
    r1.push_back(path.record_weights.empty() ? 1e8 : path.record_weights.back());
  }
  bool within = true;
  for (int k = 1; k <= 3; ++k) {
    const auto m = sample_moment(r1, k);
    within = within && std::abs(m.mean - uni_law.moments[k - 1]) <= 5.0 * m.std_error;
  }
  c.expect(within, "simulated moments (r0=1e8, 1e5 paths) within 5 sigma of (1,2,6)");
}

void winning_rate_identities(CheckSet& c) {
  const auto thr = solve_threshold(FactorDistribution::uniform());
  const double s = thr.s_star;
  QuadratureOptions qopt;
  qopt.atol = 1e-12;
  qopt.rtol = 1e-10;

  const double int_w = integrate([s](double t) { return winning_rate(s, t); }, 0.0, 1.0, qopt).value;
  const double v_inf = value_beta(1.0, kInfinity, s);
  c.expect_close("|int w - v_inf|", std::abs(int_w - v_inf), 0.0, 1e-4);
  c.expect_close("int w vs 0.580", int_w, 0.580, 1e-3);
  c.expect_close("w(0)", winning_rate(s, 0.0), 1.0 - std::exp(-s), 1e-9);
  c.expect_close("w(1)", winning_rate(s, 1.0), std::exp(-s), 1e-9);

  const double int_density =
      integrate([s](double t) { return stop_time_density(s, t); }, 0.0, 1.0, qopt).value;
  c.expect_close("int density vs 1-0.1995", int_density, 1.0 - 0.1995, 1e-3);

  SimConfig config{FactorDistribution::uniform(), 1e6, 1e-2, 1000000, kSeed + 3, 0};
  const auto report = evaluate_policy(config, BThreshold{s});
  const double ns_sigma =
      std::sqrt(report.non_stop_fraction * (1.0 - report.non_stop_fraction) /
                static_cast<double>(report.replicates));
  c.expect_close("|1 - int density - sim non_stop|",
                 std::abs(1.0 - int_density - report.non_stop_fraction), 0.0, 4.0 * ns_sigma);
}

void chain_record_laws(CheckSet& c) {
  const std::int64_t n_ratios = 100000;
  const std::int64_t batch = 600;

  const auto cdf_cube2 = [](double x) { return x <= 0.0 ? 0.0 : x - x * std::log(x); };
  const auto cdf_cube3 = [](double x) {
    if (x <= 0.0) return 0.0;
    const double L = -std::log(x);
    return x * (1.0 + L + 0.5 * L * L);
  };
  const auto cdf_interval2 = [](double x) { return 2.0 * std::sqrt(x) - x; };

  const double d2 =
      ks_statistic(chain_record_ratios(CubeSpace{2}, n_ratios, batch, kSeed + 4), cdf_cube2);
  const double d3 =
      ks_statistic(chain_record_ratios(CubeSpace{3}, n_ratios, batch, kSeed + 5), cdf_cube3);
  const double di = ks_statistic(
      chain_record_ratios(IntervalOrderSpace{2.0}, n_ratios, batch, kSeed + 6), cdf_interval2);
  c.expect_close("KS cube:2", d2, 0.0, 0.01);
  c.expect_close("KS cube:3", d3, 0.0, 0.01);
  c.expect_close("KS interval:2", di, 0.0, 0.01);
}

void cross_method_agreement(CheckSet& c) {
  {
    const double s = 0.7, x = 0.5;
    const auto grid = solve_delay_ode(FactorDistribution::delta(x), s, 3.0, 0.01);
    double max_diff = 0.0;
    for (double T = 0.75; T <= 3.0; T += 0.1125) {
      max_diff = std::max(max_diff, std::abs(grid.interpolate(T) - value_delta(x, T, s)));
    }
    c.expect_close("max|ode - piecewise| delta:0.5", max_diff, 0.0, 1e-6);
  }
  for (const double theta : {0.5, 1.0, 2.0}) {
    const auto thr = solve_threshold(FactorDistribution::beta(theta));
    const auto grid = solve_delay_ode(FactorDistribution::beta(theta), thr.s_star, 10.0, 0.02);
    double max_diff = 0.0;
    for (int i = 0; i <= 20; ++i) {
      const double T = thr.s_star + (10.0 - thr.s_star) * i / 20.0;
      max_diff = std::max(max_diff, std::abs(grid.interpolate(T) - value_beta(theta, T, thr.s_star)));
    }
    std::ostringstream label;
    label << "max|ode - closed| beta:" << theta;
    c.expect_close(label.str(), max_diff, 0.0, 1e-6);
  }
}

void smooth_fit_checks(CheckSet& c) {
  double max_root_diff = 0.0;
  for (const double theta : {0.5, 1.0, 2.0, 5.0}) {
    const auto thr = solve_threshold(FactorDistribution::beta(theta));
    const double root = find_root([theta](double s) { return smooth_fit_residual(theta, s); },
                                  0.05, 1.0);
    max_root_diff = std::max(max_root_diff, std::abs(root - thr.s_star));
  }
  c.expect_close("max|smooth-fit root - s_star|", max_root_diff, 0.0, 1e-8);

  double max_identity = 0.0;
  for (const double theta : {0.5, 1.0, 2.0, 5.0}) {
    const auto dist = FactorDistribution::beta(theta);
    for (double s = 0.1; s <= 1.51; s += 0.1) {
      const double lhs = smooth_fit_residual(theta, s);
      const double rhs = theta * (p0(s) - p1(dist, s));
      max_identity = std::max(max_identity, std::abs(lhs - rhs));
    }
  }
  c.expect_close("max|s p1'' + (s+theta) p1' - theta (p0-p1)|", max_identity, 0.0, 1e-9);
}

void discrete_time_approximation(CheckSet& c) {
  const auto report =
      evaluate_discrete(FactorDistribution::uniform(), 10000, 0.804, 400000, kSeed + 7);
  c.expect_close("discrete estimate vs 0.580", report.estimate, 0.580, 0.01);
}

}  // namespace

std::vector<CriterionResult> run_verification() {
  std::vector<CriterionResult> results;
  results.push_back(run_criterion(1, "beta threshold/value table reproduction", theta_table));
  results.push_back(run_criterion(2, "uniform benchmark (closed / ODE / Monte Carlo)",
                                  uniform_benchmark));
  results.push_back(run_criterion(3, "|log x| density case (produnif:2)", log_density_case));
  results.push_back(run_criterion(4, "point-mass case delta:1", point_mass_case));
  results.push_back(run_criterion(5, "universal lower bound exp(-1)", lower_bound_property));
  results.push_back(run_criterion(6, "entrance-law moments", entrance_moment_checks));
  results.push_back(run_criterion(7, "winning-rate identities", winning_rate_identities));
  results.push_back(run_criterion(8, "chain-record factor laws", chain_record_laws));
  results.push_back(run_criterion(9, "cross-method value agreement", cross_method_agreement));
  results.push_back(run_criterion(10, "smooth-fit characterisation", smooth_fit_checks));
  results.push_back(run_criterion(11, "discrete-time index policy", discrete_time_approximation));
  return results;
}

bool report(const std::vector<CriterionResult>& results, std::ostream& os) {
  bool all = true;
  for (const auto& r : results) {
    os << "criterion " << (r.id < 10 ? "0" : "") << r.id << " ["
       << (r.passed ? "PASS" : "FAIL") << "] " << r.name << ": " << r.detail << " ("
       << static_cast<int>(r.seconds * 100) / 100.0 << "s)\n";
    all = all && r.passed;
  }
  os << (all ? "all criteria passed" : "SOME CRITERIA FAILED") << "\n";
  return all;
}

}  // namespace lastrec
