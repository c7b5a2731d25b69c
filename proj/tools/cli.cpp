#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lastrec/chain_records.hpp"
#include "lastrec/factor_distribution.hpp"
#include "lastrec/quadrature.hpp"
#include "lastrec/simulate.hpp"
#include "lastrec/stopping.hpp"
#include "lastrec/uniform_case.hpp"
#include "lastrec/value.hpp"
#include "lastrec/verification.hpp"

namespace lastrec::cli {
namespace {

using nlohmann::json;

// all printed numbers carry 10 significant digits
double round10(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return std::strtod(buf, nullptr);
}

std::string fmt10(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

double parse_horizon(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInfinity;
  try {
    std::size_t pos = 0;
    const double T = std::stod(text, &pos);
    if (pos == text.size() && T > 0.0) return T;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("invalid --horizon '" + text + "' (positive number or 'inf')");
}

// s specifier: "optimal" or a positive number
double resolve_s(const std::string& text, const FactorDistribution& dist) {
  if (text == "optimal") return solve_threshold(dist).s_star;
  try {
    std::size_t pos = 0;
    const double s = std::stod(text, &pos);
    if (pos == text.size() && s > 0.0) return s;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("invalid --s '" + text + "' (positive number or 'optimal')");
}

Policy parse_policy(const std::string& text, const FactorDistribution& dist) {
  if (text == "optimal") return BThreshold{solve_threshold(dist).s_star};
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string head = text.substr(0, colon);
    try {
      const double x = std::stod(text.substr(colon + 1));
      if (head == "bthresh") return BThreshold{x};
      if (head == "wthresh") return WeightThreshold{x};
      if (head == "tthresh") return TimeThreshold{x};
    } catch (const std::exception&) {
    }
  }
  throw std::invalid_argument("invalid --policy '" + text +
                              "'; valid: bthresh:<s> | wthresh:<w> | tthresh:<t0> | optimal");
}

std::string policy_to_string(const Policy& policy) {
  if (const auto* b = std::get_if<BThreshold>(&policy)) return "bthresh:" + fmt10(b->s);
  if (const auto* w = std::get_if<WeightThreshold>(&policy)) return "wthresh:" + fmt10(w->w);
  return "tthresh:" + fmt10(std::get<TimeThreshold>(policy).t0);
}

int default_workers() {
  if (const char* env = std::getenv("LAST_RECORD_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;  // library default: hardware concurrency
}

void write_text(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
  file << content;
}

// ------------------------------------------------------------- subcommands

int cmd_threshold(const std::string& dist_spec, std::ostream& out) {
  const auto dist = FactorDistribution::parse(dist_spec);
  const auto thr = solve_threshold(dist);
  json j;
  j["command"] = "threshold";
  j["dist"] = dist.description();
  j["s_star"] = round10(thr.s_star);
  j["residual"] = round10(thr.residual);
  j["bracket_width"] = round10(thr.bracket_width);
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_value(const std::string& dist_spec, const std::string& horizon_spec,
              const std::string& s_spec, std::ostream& out) {
  const auto dist = FactorDistribution::parse(dist_spec);
  const double T = parse_horizon(horizon_spec);
  const double s = resolve_s(s_spec, dist);
  const auto pv = policy_value(dist, T, s);
  json j;
  j["command"] = "value";
  j["dist"] = dist.description();
  if (std::isinf(T))
    j["horizon"] = "inf";
  else
    j["horizon"] = round10(T);
  j["s"] = round10(s);
  j["s_mode"] = (s_spec == "optimal") ? "optimal" : "given";
  j["value"] = round10(pv.value);
  j["method"] = to_string(pv.method);
  if (pv.tail_bound) j["tail_bound"] = round10(*pv.tail_bound);
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_table(const std::string& theta_list, const std::string& out_path, std::ostream& out) {
  std::ostringstream csv;
  csv << "theta,s_star,v_inf\n";
  std::stringstream ss(theta_list);
  std::string item;
  bool any = false;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const double theta = std::stod(item);
    if (!(theta > 0.0)) throw std::invalid_argument("--theta-list entries must be positive");
    const auto thr = solve_threshold(FactorDistribution::beta(theta));
    const double v = value_beta(theta, kInfinity, thr.s_star);
    csv << fmt10(theta) << "," << fmt10(thr.s_star) << "," << fmt10(v) << "\n";
    any = true;
  }
  if (!any) throw std::invalid_argument("--theta-list is empty");
  write_text(out_path, csv.str(), out);
  return 0;
}

int cmd_simulate(const std::string& dist_spec, double r0, double horizon,
                 const std::string& policy_spec, std::int64_t reps, std::uint64_t seed,
                 int workers, std::ostream& out) {
  const auto dist = FactorDistribution::parse(dist_spec);
  const Policy policy = parse_policy(policy_spec, dist);
  SimConfig config{dist, r0, horizon, reps, seed, workers};
  const auto report = evaluate_policy(config, policy);
  json j;
  j["command"] = "simulate";
  j["dist"] = dist.description();
  j["r0"] = round10(r0);
  j["horizon"] = round10(horizon);
  j["policy"] = policy_to_string(policy);
  j["replicates"] = report.replicates;
  j["seed"] = report.seed;
  j["workers"] = workers;
  j["estimate"] = round10(report.estimate);
  j["stderr"] = round10(report.std_error);
  j["non_stop_fraction"] = round10(report.non_stop_fraction);
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_entrance(const std::string& dist_spec, int k, std::optional<double> tau1_t,
                 std::ostream& out) {
  const auto dist = FactorDistribution::parse(dist_spec);
  const auto law = entrance_moments(dist, k);
  json j;
  j["command"] = "entrance";
  j["dist"] = dist.description();
  j["mean_abs_log"] = round10(dist.mean_abs_log());
  json moments = json::array();
  for (const double m : law.moments) moments.push_back(round10(m));
  j["moments"] = moments;
  if (tau1_t) {
    const auto cdf = tau1_cdf(law, dist, *tau1_t);
    json t;
    t["t"] = round10(*tau1_t);
    t["value"] = round10(cdf.value);
    t["simulated"] = cdf.simulated;
    if (cdf.simulated) t["stderr"] = round10(cdf.std_error);
    j["tau1"] = t;
  }
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_winrate(const std::string& s_spec, int grid, const std::string& out_path,
                std::ostream& out) {
  const auto uni = FactorDistribution::uniform();
  const double s = resolve_s(s_spec, uni);
  const auto curve = winning_rate_curve(s, grid);
  std::ostringstream csv;
  csv << "t,w,density\n";
  for (std::size_t i = 0; i < curve.t_grid.size(); ++i) {
    const double t = curve.t_grid[i];
    csv << fmt10(t) << "," << fmt10(curve.w_values[i]) << "," << fmt10(stop_time_density(s, t))
        << "\n";
  }
  write_text(out_path, csv.str(), out);
  return 0;
}

int cmd_ode(const std::string& dist_spec, const std::string& s_spec, double horizon, double step,
            const std::string& out_path, std::ostream& out) {
  const auto dist = FactorDistribution::parse(dist_spec);
  const double s = resolve_s(s_spec, dist);
  const auto grid = solve_delay_ode(dist, s, horizon, step);
  if (!out_path.empty()) {
    std::ostringstream csv;
    csv << "T,v\n";
    for (std::size_t i = 0; i < grid.t_grid.size(); ++i)
      csv << fmt10(grid.t_grid[i]) << "," << fmt10(grid.v_values[i]) << "\n";
    write_text(out_path, csv.str(), out);
  }
  json j;
  j["command"] = "ode";
  j["dist"] = dist.description();
  j["s"] = round10(s);
  j["horizon"] = round10(horizon);
  j["step"] = round10(step);
  j["nodes"] = grid.t_grid.size();
  j["v_at_horizon"] = round10(grid.v_values.back());
  j["method"] = to_string(grid.method);
  if (!out_path.empty()) j["out"] = out_path;
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_chain_records(const std::string& space_spec, std::int64_t n, std::uint64_t seed,
                      const std::string& out_path, std::ostream& out) {
  const auto space = parse_chain_space(space_spec);
  RngStream rng(seed, 0);
  const auto weights = sample_chain_records(space, n, rng);
  std::ostringstream csv;
  csv << "index,weight\n";
  for (std::size_t i = 0; i < weights.size(); ++i)
    csv << (i + 1) << "," << fmt10(weights[i]) << "\n";
  write_text(out_path, csv.str(), out);
  return 0;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"optimal stopping for the last record of stick-breaking record processes"};
  app.name("lastrec");

  bool verify = false;
  app.add_flag("--verify-paper", verify,
               "run the built-in verification battery and print one line per criterion");

  // threshold
  auto* threshold = app.add_subcommand("threshold", "solve the optimal-threshold equation");
  std::string thr_dist;
  threshold->add_option("--dist", thr_dist, "factor distribution spec")->required();

  // value
  auto* value = app.add_subcommand("value", "success probability of a threshold policy");
  std::string val_dist, val_horizon, val_s = "optimal";
  value->add_option("--dist", val_dist, "factor distribution spec")->required();
  value->add_option("--horizon", val_horizon, "horizon T (> 0) or 'inf'")->required();
  value->add_option("--s", val_s, "threshold (positive number or 'optimal')");

  // table
  auto* table = app.add_subcommand("table", "threshold/value table for beta factors (CSV)");
  std::string tbl_thetas = "0.1,0.25,0.5,1,2,5,20";
  std::string tbl_out;
  table->add_option("--theta-list", tbl_thetas, "comma-separated theta values");
  table->add_option("--out", tbl_out, "CSV output file (stdout when omitted)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo policy evaluation");
  std::string sim_dist, sim_policy;
  double sim_r0 = 1.0, sim_horizon = 1.0;
  std::int64_t sim_reps = 100000;
  std::uint64_t sim_seed = 0;
  int sim_workers = default_workers();
  simulate->add_option("--dist", sim_dist, "factor distribution spec")->required();
  simulate->add_option("--r0", sim_r0, "initial state")->required();
  simulate->add_option("--horizon", sim_horizon, "horizon T > 0")->required();
  simulate->add_option("--policy", sim_policy,
                       "bthresh:<s> | wthresh:<w> | tthresh:<t0> | optimal")
      ->required();
  simulate->add_option("--reps", sim_reps, "number of replicates")->required();
  simulate->add_option("--seed", sim_seed, "RNG seed")->required();
  simulate->add_option("--workers", sim_workers,
                       "worker threads (default LAST_RECORD_WORKERS or all cores)");

  // entrance
  auto* entrance = app.add_subcommand("entrance", "entrance-law moments");
  std::string ent_dist;
  int ent_k = 4;
  double ent_tau1 = -1.0;
  entrance->add_option("--dist", ent_dist, "factor distribution spec")->required();
  entrance->add_option("--k", ent_k, "number of moments (default 4)");
  entrance->add_option("--tau1", ent_tau1, "also report P(tau_1 < t) at this t in (0,1]");

  // winrate
  auto* winrate = app.add_subcommand("winrate", "uniform-case winning rate curve (CSV)");
  std::string wr_s = "optimal", wr_out;
  int wr_grid = 200;
  winrate->add_option("--s", wr_s, "threshold (positive number or 'optimal')");
  winrate->add_option("--grid", wr_grid, "number of grid intervals on [0,1]");
  winrate->add_option("--out", wr_out, "CSV output file (stdout when omitted)");

  // ode
  auto* ode = app.add_subcommand("ode", "integrate the delay equation for v(., s)");
  std::string ode_dist, ode_s = "optimal", ode_out;
  double ode_horizon = 10.0, ode_step = 0.01;
  ode->add_option("--dist", ode_dist, "factor distribution spec")->required();
  ode->add_option("--s", ode_s, "threshold (positive number or 'optimal')");
  ode->add_option("--horizon", ode_horizon, "integrate up to this T")->required();
  ode->add_option("--step", ode_step, "target grid step (default 0.01)");
  ode->add_option("--out", ode_out, "write the (T, v) grid as CSV to this file");

  // chain-records
  auto* chain = app.add_subcommand("chain-records", "chain-record weights from ordered samples");
  std::string cr_space, cr_out;
  std::int64_t cr_n = 10000;
  std::uint64_t cr_seed = 0;
  chain->add_option("--space", cr_space, "cube:<d> | interval:<alpha>")->required();
  chain->add_option("--n", cr_n, "number of sampled marks")->required();
  chain->add_option("--seed", cr_seed, "RNG seed")->required();
  chain->add_option("--out", cr_out, "CSV output file (stdout when omitted)");

  app.require_subcommand(0, 1);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (verify) {
      const bool ok = report(run_verification(), out);
      return ok ? 0 : 1;
    }
    if (threshold->parsed()) return cmd_threshold(thr_dist, out);
    if (value->parsed()) return cmd_value(val_dist, val_horizon, val_s, out);
    if (table->parsed()) return cmd_table(tbl_thetas, tbl_out, out);
    if (simulate->parsed())
      return cmd_simulate(sim_dist, sim_r0, sim_horizon, sim_policy, sim_reps, sim_seed,
                          sim_workers, out);
    if (entrance->parsed())
      return cmd_entrance(ent_dist, ent_k,
                          ent_tau1 > 0.0 ? std::optional<double>(ent_tau1) : std::nullopt, out);
    if (winrate->parsed()) return cmd_winrate(wr_s, wr_grid, wr_out, out);
    if (ode->parsed()) return cmd_ode(ode_dist, ode_s, ode_horizon, ode_step, ode_out, out);
    if (chain->parsed()) return cmd_chain_records(cr_space, cr_n, cr_seed, cr_out, out);
    out << app.help();
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lastrec::cli
