#pragma once

#include <Eigen/Core>

#include <functional>
#include <stdexcept>
#include <utility>

namespace fracmim {

inline constexpr const char* kVersion = "0.1.0";

using Index = Eigen::Index;
using VecX = Eigen::VectorXd;

// Fractional order alpha together with its regime. SubOne covers 0<alpha<1,
// Band(n) covers n-1<alpha<n for integer n>=2, Integer(n) means alpha==n.
struct FractionalOrder {
  enum class Regime { SubOne, Band, Integer };

  double alpha = 0.5;
  Regime regime = Regime::SubOne;
  int n = 1;  // ceil(alpha) for SubOne/Band, the order itself for Integer

  static FractionalOrder from(double alpha);
  static FractionalOrder sub_one(double alpha);
  static FractionalOrder band(double alpha, int n);
  static FractionalOrder integer(int n);

  bool is_integer() const { return regime == Regime::Integer; }
};

// Function of time with caller-registered analytic derivatives.
// eval(k, t) returns u^{(k)}(t); k=0 is the value itself. Derivatives are
// registered up to max_order; asking beyond that is a domain error.
class SmoothFunction {
 public:
  SmoothFunction(int max_order, std::function<double(int, double)> eval)
      : max_order_(max_order), eval_(std::move(eval)) {
    if (max_order_ < 0 || !eval_) throw std::domain_error("SmoothFunction: bad construction");
  }

  double operator()(double t) const { return derivative(0, t); }

  double derivative(int k, double t) const {
    if (k < 0 || k > max_order_)
      throw std::domain_error("SmoothFunction: derivative order not registered");
    return eval_(k, t);
  }

  int max_order() const { return max_order_; }

  static SmoothFunction monomial(int p);
  static SmoothFunction exponential();
  static SmoothFunction sine();
  static SmoothFunction cosine();
  static SmoothFunction constant(double c);

 private:
  int max_order_;
  std::function<double(int, double)> eval_;
};

// Controls the adaptive product-integration quadrature.
struct QuadratureConfig {
  int panels_per_unit_time = 256;  // >= 8
  int refinement_cap = 4;          // number of panel doublings tried
  double rel_tol = 1e-8;

  void validate() const {
    if (panels_per_unit_time < 8)
      throw std::domain_error("QuadratureConfig: panels_per_unit_time must be >= 8");
    if (refinement_cap < 1)
      throw std::domain_error("QuadratureConfig: refinement_cap must be >= 1");
    if (!(rel_tol > 0)) throw std::domain_error("QuadratureConfig: rel_tol must be positive");
  }
};

}  // namespace fracmim
