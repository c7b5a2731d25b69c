#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace lastrec {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;  // >= 0
  long evaluations = 0;             // >= 1 after any successful call
};

/// Thrown when adaptive refinement exhausts its subdivision budget without
/// meeting the requested tolerance. Carries the best partial result.
class QuadratureFailure : public std::runtime_error {
 public:
  QuadratureFailure(const std::string& what, QuadratureResult partial)
      : std::runtime_error(what), partial_result(partial) {}
  QuadratureResult partial_result;
};

struct QuadratureOptions {
  double atol = 1e-12;
  double rtol = 1e-10;
  int max_levels = 60;  // bisection depth budget per panel
};

/// Definite integral of f over [lo, hi]; hi may be +infinity (mapped through
/// t = lo + u/(1-u)). Adaptive Gauss7/Kronrod15 panel bisection with the
/// embedded-rule difference as error estimate; a tanh-sinh pass picks up
/// integrable endpoint singularities that defeat plain panel refinement.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureOptions& opt = {});

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace lastrec
