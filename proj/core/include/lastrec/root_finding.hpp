#pragma once

#include <functional>
#include <stdexcept>

namespace lastrec {

class BracketingError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RootOptions {
  double xtol = 1e-12;  // final bracket width
  int max_iter = 200;
};

/// Root of g on [lo, hi] given g(lo) * g(hi) <= 0. Brent's method with a
/// guaranteed bisection fallback, so convergence to the bracket tolerance is
/// unconditional. Throws BracketingError when the endpoints do not bracket.
double find_root(const std::function<double(double)>& g, double lo, double hi,
                 const RootOptions& opt = {});

}  // namespace lastrec
