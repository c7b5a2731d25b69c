// Acceptance suite: runs the full verification battery and prints one
// pass/fail line per criterion. Exit status 0 iff everything passed.

#include <iostream>

#include "lastrec/verification.hpp"

int main() {
  const auto results = lastrec::run_verification();
  const bool ok = lastrec::report(results, std::cout);
  return ok ? 0 : 1;
}
