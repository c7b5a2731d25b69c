#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lastrec {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the full built-in verification battery: reproduction of the reference
/// threshold/value table, cross-method agreement, Monte Carlo consistency and
/// the distributional goodness-of-fit checks. Deterministic (fixed seeds).
std::vector<CriterionResult> run_verification();

/// Prints one pass/fail line per criterion; returns true iff all passed.
bool report(const std::vector<CriterionResult>& results, std::ostream& os);

}  // namespace lastrec
