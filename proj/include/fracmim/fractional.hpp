#pragma once

#include "fracmim/types.hpp"

#include <utility>
#include <vector>

namespace fracmim {

// Caputo derivative (1/Gamma(n-alpha)) \int_0^t u^{(n)}(s) (t-s)^{n-1-alpha} ds
// with n = ceil(alpha), evaluated by adaptive product integration. Requires
// derivatives registered up to n. For Integer(n) orders this returns the
// limiting value u^{(n)}(t) directly (no quadrature).
double caputo_eval(const SmoothFunction& u, const FractionalOrder& order, double t,
                   const QuadratureConfig& cfg = {});

// Transformed Caputo derivative: (1/Gamma(n+1-alpha)) \int_0^t u^{(n+1)}(s)
// (t-s)^{n-alpha} ds. Equals the Caputo derivative minus the initial-slope
// shift u^{(n)}(0) t^{n-alpha}/Gamma(n+1-alpha). Requires derivatives up to
// n+1. Integer(n) orders evaluate u^{(n)}(t) - u^{(n)}(0) exactly.
double tcaputo_eval(const SmoothFunction& u, const FractionalOrder& order, double t,
                    const QuadratureConfig& cfg = {});

// Fixed-resolution single evaluations (no refinement loop); used to study the
// quadrature's own convergence order.
double caputo_eval_panels(const SmoothFunction& u, const FractionalOrder& order, double t,
                          Index panels);
double tcaputo_eval_panels(const SmoothFunction& u, const FractionalOrder& order, double t,
                           Index panels);

// u^{(n)}(0) * t^{n-alpha} / Gamma(n+1-alpha), the term connecting the two
// derivative definitions. Not defined for integer orders.
double shift_term(double un_at_zero, const FractionalOrder& order, double t);

// Closed-form reference values for the test functions t^p and e^t.
struct ReferenceFunction {
  enum class Kind { Monomial, Exp };
  Kind kind = Kind::Exp;
  int power = 0;

  static ReferenceFunction monomial(int p);
  static ReferenceFunction exponential();
};

// Returns (caputo, tcaputo) analytically. Monomial t^p: Caputo is
// Gamma(p+1)/Gamma(p+1-alpha) t^{p-alpha} for p >= n, zero for p < n; the
// shift uses u^{(n)}(0) = p! when p == n. Exponential (alpha in (0,1) only):
// Caputo is e^t P(1-alpha, t), shift is t^{1-alpha}/Gamma(2-alpha). Accepts
// t = 0, where every value is zero.
std::pair<double, double> reference_closed_form(const ReferenceFunction& fn,
                                                const FractionalOrder& order, double t);

enum class CurveFunction { Cos, Sin };

struct AgreementRow {
  double t;
  double alpha;
  double caputo;
  double tcaputo;
};

// Samples both derivatives of cos t (orders in (0,1)) or sin t (orders in
// (1,2)) uniformly on (0, t_max]. For these functions the shift term vanishes,
// so the two columns agree up to quadrature error: within 10*cfg.rel_tol of
// the larger magnitude, floored at 1e-6 absolute. Rows are ordered with the
// alpha list outermost. A function/order mismatch is a domain error.
std::vector<AgreementRow> agreement_curves(CurveFunction fn, const std::vector<double>& alphas,
                                           double t_max, Index samples,
                                           const QuadratureConfig& cfg = {});

}  // namespace fracmim
