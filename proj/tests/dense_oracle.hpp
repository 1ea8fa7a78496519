#pragma once

// Reference evolution used to cross-check the tridiagonal solver. Assembles the
// full dense system for every step straight from the difference equations in
// delta_t form (unscaled units, direct std::pow weights, FullPivLU solve) so it
// shares no arithmetic path with the production code.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

#include "fracmim/solver.hpp"

namespace fracmim_test {

inline std::vector<fracmim::VecX> dense_reference(
    double alpha, const fracmim::Grid& grid, const fracmim::VecX& u0,
    const fracmim::VecX& psi,
    const std::function<double(double, double)>& source) {
  using fracmim::Index;
  using fracmim::VecX;
  const Index m = grid.M;
  const Index interior = m - 1;
  const double h = grid.h;
  const double tau = grid.tau;
  const double beta = std::pow(tau, 1.0 - alpha) / std::tgamma(3.0 - alpha);
  const double slope_scale = 1.0 / std::tgamma(2.0 - alpha);

  std::vector<double> weight(static_cast<std::size_t>(grid.N) + 1);
  for (std::size_t j = 0; j < weight.size(); ++j) {
    const double dj = static_cast<double>(j);
    weight[j] = std::pow(dj + 1.0, 2.0 - alpha) - std::pow(dj, 2.0 - alpha);
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(interior, interior);
  for (Index i = 0; i < interior; ++i) {
    a(i, i) = (beta + 1.0) / tau + 1.0 / (h * h);
    if (i > 0) a(i, i - 1) = -1.0 / (2.0 * h * h);
    if (i + 1 < interior) a(i, i + 1) = -1.0 / (2.0 * h * h);
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);

  std::vector<VecX> levels;
  levels.reserve(static_cast<std::size_t>(grid.N) + 1);
  levels.push_back(u0);
  for (Index k = 0; k < grid.N; ++k) {
    const VecX& prev = levels.back();
    const double theta = (static_cast<double>(k) + 0.5) * tau;
    VecX b(interior);
    for (Index i = 0; i < interior; ++i) {
      const Index node = i + 1;
      const double lap_prev =
          (prev[node + 1] - 2.0 * prev[node] + prev[node - 1]) / (2.0 * h * h);
      double history = 0.0;
      for (Index j = 1; j <= k; ++j) {
        const double coeff =
            weight[static_cast<std::size_t>(k - j)] -
            weight[static_cast<std::size_t>(k - j + 1)];
        history += coeff * (levels[static_cast<std::size_t>(j)][node] -
                            levels[static_cast<std::size_t>(j - 1)][node]) /
                   tau;
      }
      double value = (beta + 1.0) / tau * prev[node] + lap_prev +
                     beta * history +
                     beta * weight[static_cast<std::size_t>(k)] * psi[i] -
                     psi[i] * std::pow(theta, 1.0 - alpha) * slope_scale;
      if (source) value += source(grid.x(node), theta);
      b[i] = value;
    }
    const VecX sol = lu.solve(b);
    VecX level = VecX::Zero(m + 1);
    level.segment(1, interior) = sol;
    levels.push_back(level);
  }
  return levels;
}

}  // namespace fracmim_test
