#pragma once

namespace lastrec {

/// Generalised incomplete gamma integral
///     Gamma(a, b, c) = int_b^c e^{-t} t^{a-1} dt,   0 <= b <= c <= +inf.
///
/// a may be any real (negative included) as long as b > 0; for b = 0 the
/// integrand is integrable only for a > 0. Relative accuracy ~1e-10 or
/// better on non-degenerate input; Gamma(a, b, b) = 0 exactly.
///
/// Throws std::domain_error for c < b, or b = 0 with a <= 0.
double incomplete_gamma(double a, double b, double c);

/// Exponential integral E1(x) = Gamma(0, x, inf), x > 0.
double exponential_integral_e1(double x);

/// Series form of the scaled lower incomplete gamma,
///     gamma(a, x) / (x^a e^{-x}) = sum_{n>=0} x^n / (a (a+1) ... (a+n)),
/// stable for a > 0 and any x >= 0; used where x^a alone would under/overflow.
double lower_gamma_scaled(double a, double x);

}  // namespace lastrec
