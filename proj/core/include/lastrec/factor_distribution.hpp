#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lastrec/rng.hpp"

namespace lastrec {

enum class FactorKind {
  Uniform,
  Beta,               // beta(theta,1): density theta x^{theta-1}
  Delta,              // point mass at x in (0,1]
  ProductOfUniforms,  // product of d independent uniforms: density |log x|^{d-1}/(d-1)!
  IntervalSpace,      // nested-interval order space: density (alpha-1)(x^{-1/alpha}-1)
  GeometricAtoms,     // mass p q^{k-1} at q^k, k = 1,2,...
  CustomDensity,
  CustomAtoms,
};

struct Atom {
  double x;     // location in (0,1]
  double mass;  // > 0
};

/// Law of the stick-breaking factor X on (0,1]. Immutable after construction
/// and freely shareable across threads.
class FactorDistribution {
 public:
  /// Default-constructs the uniform law.
  FactorDistribution() = default;

  static FactorDistribution uniform();
  static FactorDistribution beta(double theta);
  static FactorDistribution delta(double x);
  static FactorDistribution product_of_uniforms(int d);
  static FactorDistribution interval_space(double alpha);
  static FactorDistribution geometric_atoms(double p);

  /// Extension point for laws the built-ins do not cover: a density on (0,1)
  /// (integrating to 1, integrable endpoint singularities allowed) or a
  /// finite atom list.
  static FactorDistribution custom_density(std::function<double(double)> density,
                                           std::string description);
  static FactorDistribution custom_atoms(std::vector<Atom> atoms, std::string description);

  /// Parses the textual specifier used on the command line:
  ///   uniform | beta:<theta> | delta:<x> | produnif:<d> | interval:<alpha> | geomatoms:<p>
  /// Throws std::invalid_argument listing the valid forms on bad input.
  static FactorDistribution parse(std::string_view spec);

  FactorKind kind() const { return kind_; }
  double param() const { return param_; }
  const std::string& description() const { return description_; }

  /// One draw from the law of X, always in (0,1].
  double sample(RngStream& rng) const;

  /// E[g(X)]. Exact (tail-bounded) summation for atomic kinds, transformed
  /// quadrature for the continuous ones; relative error ~1e-9.
  double expect(const std::function<double(double)>& g) const;

  /// E[g(X) 1(lo < X <= hi)] with the same accuracy contract as expect().
  double expect_between(const std::function<double(double)>& g, double lo, double hi) const;

  /// Mellin transform f(lambda) = E[X^lambda], lambda >= 0. Closed forms for
  /// every built-in kind.
  double mellin(double lambda) const;

  /// E|log X| = -f'(0). Throws std::domain_error if the defining integral
  /// diverges.
  double mean_abs_log() const;

  /// P(X <= x).
  double cdf(double x) const;

  /// True iff P(X <= x) >= x - 1e-9 at every grid point (the necessary
  /// condition for X to arise from a lower-homogeneous ordered space).
  bool lower_homogeneity_check(std::span<const double> grid) const;

  bool is_atomic() const;
  /// Atom list for atomic kinds, truncated so the omitted tail mass is below
  /// 1e-15 (GeometricAtoms); empty for continuous kinds.
  std::vector<Atom> atoms() const;

  /// Support contained in a geometric progression {c r^k}; such laws violate
  /// the entrance-law hypotheses (Delta, GeometricAtoms).
  bool has_lattice_support() const;

 private:
  FactorKind kind_ = FactorKind::Uniform;
  double param_ = 0.0;  // theta / x / d / alpha / p, by kind
  std::string description_ = "uniform";
  std::function<double(double)> custom_density_;
  std::vector<Atom> custom_atoms_;
};

}  // namespace lastrec
