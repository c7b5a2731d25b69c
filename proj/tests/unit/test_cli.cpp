#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using lastrec::cli::run;
using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("threshold: uniform JSON output") {
  const auto r = invoke({"threshold", "--dist", "beta:1"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["command"] == "threshold");
  CHECK(j["dist"] == "beta:1");
  CHECK(std::abs(j["s_star"].get<double>() - 0.804) <= 1e-3);
  CHECK(std::abs(j["residual"].get<double>()) <= 1e-9);
}

TEST_CASE("threshold: unknown dist exits 2 and lists valid specs") {
  const auto r = invoke({"threshold", "--dist", "nosuch"});
  CHECK(r.code == 2);
  CHECK(r.err.find("uniform") != std::string::npos);
  CHECK(r.err.find("geomatoms") != std::string::npos);
}

TEST_CASE("missing required flag exits 2") {
  const auto r = invoke({"threshold"});
  CHECK(r.code == 2);
}

TEST_CASE("value: infinite horizon, optimal threshold") {
  const auto r = invoke({"value", "--dist", "uniform", "--horizon", "inf"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["horizon"] == "inf");
  CHECK(j["method"] == "closed_beta");
  CHECK(j["s_mode"] == "optimal");
  CHECK(std::abs(j["value"].get<double>() - 0.580) <= 1e-3);
}

TEST_CASE("value: explicit s and finite horizon for a point mass") {
  const auto r = invoke({"value", "--dist", "delta:1", "--horizon", "2", "--s", "1"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["method"] == "piecewise_delta");
  CHECK(j["value"].get<double>() == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("table: reproduces three reference columns") {
  const auto r = invoke({"table", "--theta-list", "0.1,1,20"});
  REQUIRE(r.code == 0);
  std::istringstream csv(r.out);
  std::string line;
  REQUIRE(std::getline(csv, line));
  CHECK(line == "theta,s_star,v_inf");
  const double ref_s[] = {0.709, 0.804, 0.976};
  const double ref_v[] = {0.913, 0.580, 0.377};
  for (int i = 0; i < 3; ++i) {
    REQUIRE(std::getline(csv, line));
    double theta, s, v;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &theta, &s, &v) == 3);
    CHECK(std::abs(s - ref_s[i]) <= 1e-3);
    CHECK(std::abs(v - ref_v[i]) <= 1e-3);
  }
}

TEST_CASE("simulate: JSON echoes the inputs and is seed-deterministic") {
  const std::vector<std::string> args = {"simulate", "--dist", "delta:1",  "--r0",
                                         "1",        "--horizon", "2",     "--policy",
                                         "bthresh:1", "--reps", "20000",   "--seed", "7"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  REQUIRE(a.code == 0);
  const json ja = json::parse(a.out);
  const json jb = json::parse(b.out);
  CHECK(ja["estimate"] == jb["estimate"]);
  CHECK(ja["dist"] == "delta:1");
  CHECK(ja["seed"] == 7);
  CHECK(ja["policy"] == "bthresh:1");
  CHECK(std::abs(ja["estimate"].get<double>() - std::exp(-1.0)) <= 0.02);
  CHECK(ja.contains("stderr"));
  CHECK(ja.contains("non_stop_fraction"));
}

TEST_CASE("simulate: optimal policy resolves to the bthresh threshold") {
  const auto r = invoke({"simulate", "--dist", "uniform", "--r0", "10", "--horizon", "1",
                         "--policy", "optimal", "--reps", "1000", "--seed", "1"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  const std::string policy = j["policy"].get<std::string>();
  CHECK(policy.substr(0, 8) == "bthresh:");
  CHECK(std::abs(std::stod(policy.substr(8)) - 0.804) <= 1e-3);
}

TEST_CASE("entrance: uniform moments with tau1") {
  const auto r = invoke({"entrance", "--dist", "uniform", "--k", "4", "--tau1", "0.5"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  const auto moments = j["moments"].get<std::vector<double>>();
  REQUIRE(moments.size() == 4);
  CHECK(moments[3] == doctest::Approx(24.0).epsilon(1e-9));
  CHECK(j["tau1"]["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(j["tau1"]["simulated"] == false);
}

TEST_CASE("entrance: lattice law is a numerical failure (exit 1)") {
  const auto r = invoke({"entrance", "--dist", "geomatoms:0.5"});
  CHECK(r.code == 1);
}

TEST_CASE("winrate: CSV grid with boundary rows") {
  const auto r = invoke({"winrate", "--grid", "10"});
  REQUIRE(r.code == 0);
  std::istringstream csv(r.out);
  std::string line;
  REQUIRE(std::getline(csv, line));
  CHECK(line == "t,w,density");
  int rows = 0;
  double t = 0.0, w = 0.0, rho = 0.0;
  std::string first, last;
  while (std::getline(csv, line)) {
    if (rows == 0) first = line;
    last = line;
    ++rows;
  }
  CHECK(rows == 11);
  REQUIRE(std::sscanf(first.c_str(), "%lf,%lf,%lf", &t, &w, &rho) == 3);
  CHECK(t == 0.0);
  CHECK(w == doctest::Approx(1.0 - std::exp(-0.8043522628)).epsilon(1e-6));
  REQUIRE(std::sscanf(last.c_str(), "%lf,%lf,%lf", &t, &w, &rho) == 3);
  CHECK(t == 1.0);
  CHECK(w == doctest::Approx(std::exp(-0.8043522628)).epsilon(1e-6));
  CHECK(rho == doctest::Approx(std::exp(-0.8043522628)).epsilon(1e-6));
}

TEST_CASE("ode: JSON summary and CSV grid file") {
  const std::string path = "test_cli_ode_grid.csv";
  const auto r = invoke({"ode", "--dist", "uniform", "--horizon", "3", "--step", "0.01",
                         "--out", path});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["method"] == "delay_ode");
  CHECK(j["v_at_horizon"].get<double>() > 0.36);
  std::ifstream file(path);
  REQUIRE(file.good());
  std::string header;
  std::getline(file, header);
  CHECK(header == "T,v");
  int rows = 0;
  std::string line;
  while (std::getline(file, line)) ++rows;
  CHECK(rows == j["nodes"].get<int>());
  std::remove(path.c_str());
}

TEST_CASE("chain-records: CSV of decreasing weights") {
  const auto r = invoke({"chain-records", "--space", "cube:2", "--n", "5000", "--seed", "3"});
  REQUIRE(r.code == 0);
  std::istringstream csv(r.out);
  std::string line;
  REQUIRE(std::getline(csv, line));
  CHECK(line == "index,weight");
  double prev = 2.0;
  int rows = 0;
  while (std::getline(csv, line)) {
    int idx;
    double w;
    REQUIRE(std::sscanf(line.c_str(), "%d,%lf", &idx, &w) == 2);
    CHECK(w < prev);
    prev = w;
    ++rows;
  }
  CHECK(rows >= 2);
}

TEST_CASE("chain-records: bad space exits 2") {
  const auto r = invoke({"chain-records", "--space", "torus:2", "--n", "10", "--seed", "1"});
  CHECK(r.code == 2);
}

TEST_CASE("help mentions every subcommand and the verification flag") {
  const auto r = invoke({"--help"});
  REQUIRE(r.code == 0);
  for (const char* name : {"threshold", "value", "table", "simulate", "entrance", "winrate",
                           "ode", "chain-records", "--verify-paper"}) {
    CAPTURE(name);
    CHECK(r.out.find(name) != std::string::npos);
  }
}

TEST_CASE("no arguments prints help and exits 2") {
  const auto r = invoke({});
  CHECK(r.code == 2);
  CHECK(r.out.find("threshold") != std::string::npos);
}
