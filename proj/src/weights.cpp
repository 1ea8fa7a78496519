#include "fracmim/weights.hpp"

#include "fracmim/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace fracmim {

WeightTable build_weights(double alpha, Index count) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("build_weights: alpha must lie in (0,1)");
  if (count < 1) throw std::domain_error("build_weights: count must be >= 1");

  const double q = 2.0 - alpha;
  WeightTable table;
  table.alpha = alpha;
  table.m.resize(count);
  table.m[0] = 1.0;
  for (Index j = 1; j < count; ++j) {
    const double jd = static_cast<double>(j);
    if (j < 64) {
      table.m[j] = std::pow(jd + 1.0, q) - std::pow(jd, q);
    } else {
      table.m[j] = std::pow(jd, q) * std::expm1(q * std::log1p(1.0 / jd));
    }
  }
  table.g.resize(count > 1 ? count - 1 : 0);
  for (Index j = 1; j < count; ++j) table.g[j - 1] = table.m[j] - table.m[j - 1];
  return table;
}

double stability_margin(double alpha, double tau) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("stability_margin: alpha must lie in (0,1)");
  if (!(tau > 0.0)) throw std::domain_error("stability_margin: tau must be positive");
  return gamma_fn(3.0 - alpha) - (std::pow(2.0, 2.0 - alpha) - 3.0) * std::pow(tau, 1.0 - alpha);
}

}  // namespace fracmim
