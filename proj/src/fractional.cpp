#include "fracmim/fractional.hpp"

#include "fracmim/parallel.hpp"
#include "fracmim/special_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracmim {

FractionalOrder FractionalOrder::from(double alpha) {
  if (!(alpha > 0)) throw std::domain_error("FractionalOrder: alpha must be positive");
  if (alpha == std::floor(alpha)) return integer(static_cast<int>(alpha));
  const int n = static_cast<int>(std::ceil(alpha));
  return n == 1 ? sub_one(alpha) : band(alpha, n);
}

FractionalOrder FractionalOrder::sub_one(double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw std::domain_error("FractionalOrder: SubOne needs 0<alpha<1");
  return {alpha, Regime::SubOne, 1};
}

FractionalOrder FractionalOrder::band(double alpha, int n) {
  if (n < 2 || !(alpha > n - 1 && alpha < n))
    throw std::domain_error("FractionalOrder: Band(n) needs n-1<alpha<n, n>=2");
  return {alpha, Regime::Band, n};
}

FractionalOrder FractionalOrder::integer(int n) {
  if (n < 1) throw std::domain_error("FractionalOrder: integer order must be >= 1");
  return {static_cast<double>(n), Regime::Integer, n};
}

namespace {

double factorial(int p) {
  double r = 1.0;
  for (int i = 2; i <= p; ++i) r *= i;
  return r;
}

}  // namespace

SmoothFunction SmoothFunction::monomial(int p) {
  if (p < 0) throw std::domain_error("SmoothFunction::monomial: power must be >= 0");
  return SmoothFunction(16, [p](int k, double t) {
    if (k > p) return 0.0;
    double c = 1.0;
    for (int i = 0; i < k; ++i) c *= (p - i);
    return c * std::pow(t, p - k);
  });
}

SmoothFunction SmoothFunction::exponential() {
  return SmoothFunction(16, [](int, double t) { return std::exp(t); });
}

SmoothFunction SmoothFunction::sine() {
  return SmoothFunction(16, [](int k, double t) { return std::sin(t + k * M_PI_2); });
}

SmoothFunction SmoothFunction::cosine() {
  return SmoothFunction(16, [](int k, double t) { return std::cos(t + k * M_PI_2); });
}

SmoothFunction SmoothFunction::constant(double c) {
  return SmoothFunction(16, [c](int k, double) { return k == 0 ? c : 0.0; });
}

namespace {

// Product integration of \int_0^t u^{(m)}(s) (t-s)^q ds with q > -1:
// u^{(m)} is interpolated linearly on each panel and the kernel is integrated
// exactly. Writing w = t-s and p1 = w^{q+1}, p2 = p1*w, the panel [s_i,s_{i+1}]
// contributes (g_i + b_i w_i)(p1_i - p1_{i+1})/(q+1) - b_i (p2_i - p2_{i+1})/(q+2)
// with b_i the interpolation slope in s. Kahan summation keeps the panel count
// from eroding the result.
double product_quadrature(const SmoothFunction& u, int m, double q, double t, Index panels) {
  const double inv_q1 = 1.0 / (q + 1.0);
  const double inv_q2 = 1.0 / (q + 2.0);
  const double ds = t / static_cast<double>(panels);

  double w_i = t;  // w at s_0 = 0
  double p1_i = std::pow(w_i, q + 1.0);
  double p2_i = p1_i * w_i;
  double g_i = u.derivative(m, 0.0);

  double sum = 0.0, comp = 0.0;
  for (Index i = 0; i < panels; ++i) {
    const double w_n = t * static_cast<double>(panels - i - 1) / static_cast<double>(panels);
    const double p1_n = std::pow(w_n, q + 1.0);
    const double p2_n = p1_n * w_n;
    const double s_n = t * static_cast<double>(i + 1) / static_cast<double>(panels);
    const double g_n = u.derivative(m, s_n);

    const double b = (g_n - g_i) / ds;
    const double term = (g_i + b * w_i) * (p1_i - p1_n) * inv_q1 - b * (p2_i - p2_n) * inv_q2;

    const double y = term - comp;
    const double tmp = sum + y;
    comp = (tmp - sum) - y;
    sum = tmp;

    w_i = w_n;
    p1_i = p1_n;
    p2_i = p2_n;
    g_i = g_n;
  }
  return sum;
}

Index base_panels(const QuadratureConfig& cfg, double t) {
  const double want = std::ceil(static_cast<double>(cfg.panels_per_unit_time) * t);
  return std::max<Index>(4, static_cast<Index>(want));
}

double adaptive_quadrature(const SmoothFunction& u, int m, double q, double prefactor, double t,
                           const QuadratureConfig& cfg) {
  cfg.validate();
  Index panels = base_panels(cfg, t);
  double prev = prefactor * product_quadrature(u, m, q, t, panels);
  for (int d = 0; d < cfg.refinement_cap; ++d) {
    panels *= 2;
    const double cur = prefactor * product_quadrature(u, m, q, t, panels);
    if (std::fabs(cur - prev) <= cfg.rel_tol * (std::fabs(cur) + 1.0)) return cur;
    prev = cur;
  }
  throw std::runtime_error("fractional derivative quadrature did not converge within the refinement cap");
}

void require_order(const SmoothFunction& u, int needed, const char* who) {
  if (u.max_order() < needed)
    throw std::domain_error(std::string(who) + ": function does not register enough derivatives");
}

}  // namespace

double caputo_eval(const SmoothFunction& u, const FractionalOrder& order, double t,
                   const QuadratureConfig& cfg) {
  if (!(t > 0)) throw std::domain_error("caputo_eval: t must be positive");
  if (order.is_integer()) {
    // limiting case: the derivative of integer order n
    require_order(u, order.n, "caputo_eval");
    return u.derivative(order.n, t);
  }
  const int n = order.n;
  require_order(u, n, "caputo_eval");
  const double q = n - 1.0 - order.alpha;
  return adaptive_quadrature(u, n, q, 1.0 / gamma_fn(n - order.alpha), t, cfg);
}

double tcaputo_eval(const SmoothFunction& u, const FractionalOrder& order, double t,
                    const QuadratureConfig& cfg) {
  if (!(t > 0)) throw std::domain_error("tcaputo_eval: t must be positive");
  if (order.is_integer()) {
    require_order(u, order.n, "tcaputo_eval");
    return u.derivative(order.n, t) - u.derivative(order.n, 0.0);
  }
  const int n = order.n;
  require_order(u, n + 1, "tcaputo_eval");
  const double q = n - order.alpha;
  return adaptive_quadrature(u, n + 1, q, 1.0 / gamma_fn(n + 1.0 - order.alpha), t, cfg);
}

double caputo_eval_panels(const SmoothFunction& u, const FractionalOrder& order, double t,
                          Index panels) {
  if (!(t > 0) || panels < 1) throw std::domain_error("caputo_eval_panels: bad arguments");
  if (order.is_integer()) return u.derivative(order.n, t);
  const int n = order.n;
  require_order(u, n, "caputo_eval_panels");
  const double q = n - 1.0 - order.alpha;
  return product_quadrature(u, n, q, t, panels) / gamma_fn(n - order.alpha);
}

double tcaputo_eval_panels(const SmoothFunction& u, const FractionalOrder& order, double t,
                           Index panels) {
  if (!(t > 0) || panels < 1) throw std::domain_error("tcaputo_eval_panels: bad arguments");
  if (order.is_integer()) return u.derivative(order.n, t) - u.derivative(order.n, 0.0);
  const int n = order.n;
  require_order(u, n + 1, "tcaputo_eval_panels");
  const double q = n - order.alpha;
  return product_quadrature(u, n + 1, q, t, panels) / gamma_fn(n + 1.0 - order.alpha);
}

double shift_term(double un_at_zero, const FractionalOrder& order, double t) {
  if (order.is_integer()) throw std::domain_error("shift_term: not defined for integer orders");
  if (!(t > 0)) throw std::domain_error("shift_term: t must be positive");
  const int n = order.n;
  return un_at_zero * std::pow(t, n - order.alpha) / gamma_fn(n + 1.0 - order.alpha);
}

ReferenceFunction ReferenceFunction::monomial(int p) {
  if (p < 0) throw std::domain_error("ReferenceFunction::monomial: power must be >= 0");
  return {Kind::Monomial, p};
}

ReferenceFunction ReferenceFunction::exponential() { return {Kind::Exp, 0}; }

std::pair<double, double> reference_closed_form(const ReferenceFunction& fn,
                                                const FractionalOrder& order, double t) {
  if (t < 0) throw std::domain_error("reference_closed_form: t must be nonnegative");

  if (fn.kind == ReferenceFunction::Kind::Exp) {
    if (order.regime != FractionalOrder::Regime::SubOne)
      throw std::domain_error("reference_closed_form: exp supports orders in (0,1) only");
    if (t == 0.0) return {0.0, 0.0};
    const double a = order.alpha;
    const double caputo = std::exp(t) * lower_incomplete_gamma_regularized(1.0 - a, t);
    const double tcaputo = caputo - std::pow(t, 1.0 - a) / gamma_fn(2.0 - a);
    return {caputo, tcaputo};
  }

  const int p = fn.power;
  if (order.is_integer()) {
    const int n = order.n;
    auto deriv = [p, n](double s) {
      if (p < n) return 0.0;
      double c = 1.0;
      for (int i = 0; i < n; ++i) c *= (p - i);
      return c * std::pow(s, p - n);
    };
    const double caputo = deriv(t);
    return {caputo, caputo - deriv(0.0)};
  }

  const int n = order.n;
  const double a = order.alpha;
  double caputo = 0.0;
  if (p >= n) caputo = gamma_fn(p + 1.0) / gamma_fn(p + 1.0 - a) * std::pow(t, p - a);
  double shift = 0.0;
  if (p == n && t > 0.0) shift = shift_term(factorial(p), order, t);
  return {caputo, caputo - shift};
}

std::vector<AgreementRow> agreement_curves(CurveFunction fn, const std::vector<double>& alphas,
                                           double t_max, Index samples,
                                           const QuadratureConfig& cfg) {
  if (samples < 2) throw std::domain_error("agreement_curves: samples must be >= 2");
  if (!(t_max > 0)) throw std::domain_error("agreement_curves: t_max must be positive");
  cfg.validate();

  std::vector<FractionalOrder> orders;
  orders.reserve(alphas.size());
  for (double a : alphas) {
    if (fn == CurveFunction::Cos) {
      if (!(a > 0 && a < 1))
        throw std::domain_error("agreement_curves: cos curves need orders in (0,1)");
      orders.push_back(FractionalOrder::sub_one(a));
    } else {
      if (!(a > 1 && a < 2))
        throw std::domain_error("agreement_curves: sin curves need orders in (1,2)");
      orders.push_back(FractionalOrder::band(a, 2));
    }
  }

  const SmoothFunction u = fn == CurveFunction::Cos ? SmoothFunction::cosine()
                                                    : SmoothFunction::sine();
  const Index total = static_cast<Index>(alphas.size()) * samples;
  std::vector<AgreementRow> rows(total);
  parallel_for(total, [&](Index idx) {
    const Index ai = idx / samples;
    const Index si = idx % samples;
    const double t = t_max * static_cast<double>(si + 1) / static_cast<double>(samples);
    AgreementRow& row = rows[idx];
    row.t = t;
    row.alpha = alphas[static_cast<std::size_t>(ai)];
    row.caputo = caputo_eval(u, orders[static_cast<std::size_t>(ai)], t, cfg);
    row.tcaputo = tcaputo_eval(u, orders[static_cast<std::size_t>(ai)], t, cfg);
  });
  return rows;
}

}  // namespace fracmim
