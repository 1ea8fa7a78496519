#pragma once

namespace fracmim {

// Gamma function for x > 0, relative error <= 1e-13. Throws std::domain_error
// for x <= 0 (non-positive arguments never arise from a valid order).
double gamma_fn(double x);

// log(Gamma(x)) for x > 0.
double lgamma_fn(double x);

// Regularized lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a) for a > 0,
// x >= 0. Relative error <= 1e-12. Power series for x < a+1, continued
// fraction of the complement otherwise.
double lower_incomplete_gamma_regularized(double a, double x);

}  // namespace fracmim
