#include "lastrec/factor_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <stdexcept>

#include "lastrec/quadrature.hpp"
#include "lastrec/incomplete_gamma.hpp"

namespace lastrec {
namespace {

double parse_number(std::string_view text, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument(std::string("invalid ") + what + " parameter: '" +
                                std::string(text) + "'");
  return value;
}

std::string format_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// tail-bounded truncation for the geometric-atom sums
constexpr double kAtomTailBound = 1e-15;

}  // namespace

FactorDistribution FactorDistribution::uniform() { return FactorDistribution{}; }

FactorDistribution FactorDistribution::beta(double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("beta: requires theta > 0");
  FactorDistribution d;
  d.kind_ = FactorKind::Beta;
  d.param_ = theta;
  d.description_ = "beta:" + format_param(theta);
  return d;
}

FactorDistribution FactorDistribution::delta(double x) {
  if (!(x > 0.0 && x <= 1.0)) throw std::invalid_argument("delta: requires x in (0,1]");
  FactorDistribution d;
  d.kind_ = FactorKind::Delta;
  d.param_ = x;
  d.description_ = "delta:" + format_param(x);
  return d;
}

FactorDistribution FactorDistribution::product_of_uniforms(int n) {
  if (n < 1) throw std::invalid_argument("product_of_uniforms: requires d >= 1");
  FactorDistribution d;
  d.kind_ = FactorKind::ProductOfUniforms;
  d.param_ = static_cast<double>(n);
  d.description_ = "produnif:" + std::to_string(n);
  return d;
}

FactorDistribution FactorDistribution::interval_space(double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("interval_space: requires alpha > 1");
  FactorDistribution d;
  d.kind_ = FactorKind::IntervalSpace;
  d.param_ = alpha;
  d.description_ = "interval:" + format_param(alpha);
  return d;
}

FactorDistribution FactorDistribution::geometric_atoms(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("geometric_atoms: requires p in (0,1)");
  FactorDistribution d;
  d.kind_ = FactorKind::GeometricAtoms;
  d.param_ = p;
  d.description_ = "geomatoms:" + format_param(p);
  return d;
}

FactorDistribution FactorDistribution::custom_density(std::function<double(double)> density,
                                                      std::string description) {
  if (!density) throw std::invalid_argument("custom_density: empty density");
  FactorDistribution d;
  d.kind_ = FactorKind::CustomDensity;
  d.custom_density_ = std::move(density);
  d.description_ = std::move(description);
  return d;
}

FactorDistribution FactorDistribution::custom_atoms(std::vector<Atom> atoms,
                                                    std::string description) {
  if (atoms.empty()) throw std::invalid_argument("custom_atoms: empty atom list");
  double mass = 0.0;
  for (const auto& a : atoms) {
    if (!(a.x > 0.0 && a.x <= 1.0 && a.mass > 0.0))
      throw std::invalid_argument("custom_atoms: atoms must lie in (0,1] with positive mass");
    mass += a.mass;
  }
  if (std::abs(mass - 1.0) > 1e-12)
    throw std::invalid_argument("custom_atoms: masses must sum to 1");
  std::sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) { return l.x < r.x; });
  FactorDistribution d;
  d.kind_ = FactorKind::CustomAtoms;
  d.custom_atoms_ = std::move(atoms);
  d.description_ = std::move(description);
  return d;
}

FactorDistribution FactorDistribution::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{}
                                                               : spec.substr(colon + 1);
  const auto need_arg = [&](const char* name) {
    if (arg.empty())
      throw std::invalid_argument(std::string(name) + " requires a parameter, e.g. '" + name +
                                  ":0.5'");
  };
  if (head == "uniform") {
    if (colon != std::string_view::npos)
      throw std::invalid_argument("'uniform' takes no parameter");
    return uniform();
  }
  if (head == "beta") {
    need_arg("beta");
    return beta(parse_number(arg, "beta"));
  }
  if (head == "delta") {
    need_arg("delta");
    return delta(parse_number(arg, "delta"));
  }
  if (head == "produnif") {
    need_arg("produnif");
    const double d = parse_number(arg, "produnif");
    if (d != std::floor(d) || d < 1.0 || d > 1000.0)
      throw std::invalid_argument("produnif requires an integer d >= 1");
    return product_of_uniforms(static_cast<int>(d));
  }
  if (head == "interval") {
    need_arg("interval");
    return interval_space(parse_number(arg, "interval"));
  }
  if (head == "geomatoms") {
    need_arg("geomatoms");
    return geometric_atoms(parse_number(arg, "geomatoms"));
  }
  throw std::invalid_argument(
      "unknown distribution spec '" + std::string(spec) +
      "'; valid: uniform | beta:<theta> | delta:<x> | produnif:<d> | interval:<alpha> | "
      "geomatoms:<p>");
}

bool FactorDistribution::is_atomic() const {
  return kind_ == FactorKind::Delta || kind_ == FactorKind::GeometricAtoms ||
         kind_ == FactorKind::CustomAtoms;
}

bool FactorDistribution::has_lattice_support() const {
  return kind_ == FactorKind::Delta || kind_ == FactorKind::GeometricAtoms;
}

std::vector<Atom> FactorDistribution::atoms() const {
  switch (kind_) {
    case FactorKind::Delta:
      return {{param_, 1.0}};
    case FactorKind::CustomAtoms:
      return custom_atoms_;
    case FactorKind::GeometricAtoms: {
      const double p = param_;
      const double q = 1.0 - p;
      std::vector<Atom> out;
      double mass = p;       // p q^{k-1}
      double location = q;   // q^k
      double tail = 1.0;     // q^{k-1} = mass not yet emitted
      while (tail > kAtomTailBound && location > 0.0) {
        out.push_back({location, mass});
        tail *= q;
        mass *= q;
        location *= q;
      }
      return out;
    }
    default:
      return {};
  }
}

double FactorDistribution::sample(RngStream& rng) const {
  switch (kind_) {
    case FactorKind::Uniform:
      return rng.uniform();
    case FactorKind::Beta:
      return std::pow(rng.uniform(), 1.0 / param_);
    case FactorKind::Delta:
      return param_;
    case FactorKind::ProductOfUniforms: {
      double x = 1.0;
      const int d = static_cast<int>(param_);
      for (int i = 0; i < d; ++i) x *= rng.uniform();
      return x > 0.0 ? x : std::numeric_limits<double>::min();
    }
    case FactorKind::GeometricAtoms: {
      const std::uint64_t k = rng.geometric(param_);
      const double x = std::pow(1.0 - param_, static_cast<double>(k));
      return x > 0.0 ? x : std::numeric_limits<double>::min();
    }
    case FactorKind::IntervalSpace:
    case FactorKind::CustomDensity: {
      // inverse-CDF bisection; the CDF is monotone and cheap for IntervalSpace
      const double u = rng.uniform();
      double lo = 0.0, hi = 1.0;
      for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < u ? lo : hi) = mid;
      }
      return std::max(0.5 * (lo + hi), std::numeric_limits<double>::min());
    }
    case FactorKind::CustomAtoms: {
      double u = rng.uniform();
      for (const auto& a : custom_atoms_) {
        if (u <= a.mass) return a.x;
        u -= a.mass;
      }
      return custom_atoms_.back().x;
    }
  }
  throw std::logic_error("sample: unreachable");
}

double FactorDistribution::expect(const std::function<double(double)>& g) const {
  return expect_between(g, 0.0, 1.0);
}

double FactorDistribution::expect_between(const std::function<double(double)>& g, double lo,
                                          double hi) const {
  lo = std::max(lo, 0.0);
  hi = std::min(hi, 1.0);
  if (hi <= lo) return 0.0;

  QuadratureOptions opt;
  opt.atol = 1e-13;
  opt.rtol = 1e-10;

  switch (kind_) {
    case FactorKind::Delta:
      return (param_ > lo && param_ <= hi) ? g(param_) : 0.0;
    case FactorKind::GeometricAtoms:
    case FactorKind::CustomAtoms: {
      double sum = 0.0;
      for (const auto& a : atoms())
        if (a.x > lo && a.x <= hi) sum += a.mass * g(a.x);
      return sum;
    }
    case FactorKind::Uniform:
      return integrate(g, lo, hi, opt).value;
    case FactorKind::Beta: {
      // x = u^{1/theta} turns the theta x^{theta-1} weight into du
      const double inv_theta = 1.0 / param_;
      const auto h = [&](double u) { return g(std::pow(u, inv_theta)); };
      return integrate(h, std::pow(lo, param_), std::pow(hi, param_), opt).value;
    }
    case FactorKind::ProductOfUniforms: {
      // x = e^{-u}: gamma(d) weight u^{d-1} e^{-u} / (d-1)!
      const int d = static_cast<int>(param_);
      const double norm = std::exp(-log_factorial(d - 1));
      const auto h = [&](double u) {
        return g(std::exp(-u)) * norm * std::pow(u, d - 1) * std::exp(-u);
      };
      const double upper = lo > 0.0 ? -std::log(lo) : kInfinity;
      const double lower = -std::log(hi);
      return integrate(h, lower, upper, opt).value;
    }
    case FactorKind::IntervalSpace: {
      // x = u^{alpha/(alpha-1)} flattens the x^{-1/alpha} singularity
      const double alpha = param_;
      const double power = alpha / (alpha - 1.0);
      const double inv_am1 = 1.0 / (alpha - 1.0);
      const auto h = [&](double u) {
        return alpha * g(std::pow(u, power)) * (1.0 - std::pow(u, inv_am1));
      };
      return integrate(h, std::pow(lo, 1.0 / power), std::pow(hi, 1.0 / power), opt).value;
    }
    case FactorKind::CustomDensity: {
      const auto h = [&](double x) { return g(x) * custom_density_(x); };
      return integrate(h, lo, hi, opt).value;
    }
  }
  throw std::logic_error("expect_between: unreachable");
}

double FactorDistribution::mellin(double lambda) const {
  if (!(lambda >= 0.0)) throw std::invalid_argument("mellin: requires lambda >= 0");
  switch (kind_) {
    case FactorKind::Uniform:
      return 1.0 / (1.0 + lambda);
    case FactorKind::Beta:
      return param_ / (param_ + lambda);
    case FactorKind::Delta:
      return std::pow(param_, lambda);
    case FactorKind::ProductOfUniforms:
      return std::pow(1.0 + lambda, -param_);
    case FactorKind::GeometricAtoms: {
      const double p = param_, q = 1.0 - p;
      return p * std::pow(q, lambda) / (1.0 - std::pow(q, lambda + 1.0));
    }
    case FactorKind::IntervalSpace: {
      const double alpha = param_;
      return (alpha - 1.0) *
             (alpha / (alpha * (lambda + 1.0) - 1.0) - 1.0 / (lambda + 1.0));
    }
    default:
      return expect([lambda](double x) { return std::pow(x, lambda); });
  }
}

double FactorDistribution::mean_abs_log() const {
  switch (kind_) {
    case FactorKind::Uniform:
      return 1.0;
    case FactorKind::Beta:
      return 1.0 / param_;
    case FactorKind::Delta:
      return -std::log(param_);
    case FactorKind::ProductOfUniforms:
      return param_;
    case FactorKind::GeometricAtoms:
      return -std::log(1.0 - param_) / param_;
    case FactorKind::IntervalSpace:
      return (2.0 * param_ - 1.0) / (param_ - 1.0);
    default: {
      try {
        return expect([](double x) { return -std::log(x); });
      } catch (const QuadratureFailure&) {
        throw std::domain_error("mean_abs_log: E|log X| diverges");
      }
    }
  }
}

double FactorDistribution::cdf(double x) const {
  if (x < 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  switch (kind_) {
    case FactorKind::Uniform:
      return x;
    case FactorKind::Beta:
      return std::pow(x, param_);
    case FactorKind::Delta:
      return x >= param_ ? 1.0 : 0.0;
    case FactorKind::ProductOfUniforms: {
      if (x == 0.0) return 0.0;
      // P(X <= x) = P(Gamma(d) >= |log x|)
      const int d = static_cast<int>(param_);
      const double L = -std::log(x);
      return incomplete_gamma(d, L, kInfinity) * std::exp(-log_factorial(d - 1));
    }
    case FactorKind::IntervalSpace: {
      const double alpha = param_;
      return alpha * std::pow(x, (alpha - 1.0) / alpha) - (alpha - 1.0) * x;
    }
    case FactorKind::GeometricAtoms: {
      if (x <= 0.0) return 0.0;
      const double q = 1.0 - param_;
      // smallest k with q^k <= x
      double k0 = std::ceil(std::log(x) / std::log(q));
      if (std::pow(q, k0 - 1.0) <= x) k0 -= 1.0;  // guard the rounding edge
      if (k0 < 1.0) k0 = 1.0;
      return std::pow(q, k0 - 1.0);
    }
    case FactorKind::CustomAtoms: {
      double sum = 0.0;
      for (const auto& a : custom_atoms_)
        if (a.x <= x) sum += a.mass;
      return sum;
    }
    case FactorKind::CustomDensity: {
      if (x == 0.0) return 0.0;
      QuadratureOptions opt;
      opt.atol = 1e-13;
      opt.rtol = 1e-10;
      return integrate(custom_density_, 0.0, x, opt).value;
    }
  }
  throw std::logic_error("cdf: unreachable");
}

bool FactorDistribution::lower_homogeneity_check(std::span<const double> grid) const {
  constexpr double kTol = 1e-9;
  for (const double x : grid) {
    if (x < 0.0 || x > 1.0)
      throw std::invalid_argument("lower_homogeneity_check: grid points must lie in [0,1]");
    if (cdf(x) < x - kTol) return false;
  }
  return true;
}

}  // namespace lastrec
