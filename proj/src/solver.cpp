#include "fracmim/solver.hpp"

#include "fracmim/special_functions.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fracmim {

namespace {

void validate_problem(const Problem& p, bool need_phi) {
  if (!(p.length > 0) || !(p.horizon > 0))
    throw std::domain_error("Problem: length and horizon must be positive");
  if (!(p.alpha > 0 && p.alpha < 1)) throw std::domain_error("Problem: alpha must lie in (0,1)");
  if (need_phi) {
    if (!p.phi) throw std::domain_error("Problem: phi is required");
    if (std::fabs(p.phi(0.0)) > 1e-9 || std::fabs(p.phi(p.length)) > 1e-9)
      throw std::domain_error("Problem: phi must vanish at both boundaries");
  }
}

}  // namespace

Grid make_grid(const Problem& problem, Index M, Index N) {
  if (M < 2) throw std::domain_error("Grid: M must be >= 2");
  if (N < 1) throw std::domain_error("Grid: N must be >= 1");
  Grid g;
  g.M = M;
  g.N = N;
  g.h = problem.length / static_cast<double>(M);
  g.tau = problem.horizon / static_cast<double>(N);
  return g;
}

VecX compute_psi(const Problem& problem, const Grid& grid) {
  validate_problem(problem, true);
  if (!problem.source) throw std::domain_error("compute_psi: source is required");
  VecX psi(grid.M - 1);
  for (Index i = 1; i < grid.M; ++i) {
    const double xi = grid.x(i);
    double lap;
    if (problem.phi_xx) {
      lap = problem.phi_xx(xi);
    } else {
      lap = (problem.phi(grid.x(i + 1)) - 2.0 * problem.phi(xi) + problem.phi(grid.x(i - 1))) /
            (grid.h * grid.h);
    }
    psi[i - 1] = lap + problem.source(xi, 0.0);
  }
  return psi;
}

TridiagonalSystem assemble_step(Index k, const SolutionHistory& history,
                                const WeightTable& weights, const Problem& problem,
                                const Grid& grid) {
  if (static_cast<Index>(history.levels.size()) <= k)
    throw std::out_of_range("assemble_step: history is missing a level");
  if (weights.count() <= k)
    throw std::out_of_range("assemble_step: weight table is too short");

  const Index m = grid.M - 1;
  const double h2 = grid.h * grid.h;
  const double tau = grid.tau;
  const double alpha = problem.alpha;
  const double beta = std::pow(tau, 1.0 - alpha) / gamma_fn(3.0 - alpha);

  TridiagonalSystem sys;
  sys.lower = VecX::Constant(m, -tau / (2.0 * h2));
  sys.upper = sys.lower;
  sys.diag = VecX::Constant(m, tau / h2 + 1.0 + beta);

  const VecX& uk = history.levels[static_cast<std::size_t>(k)];
  const double t_half = (static_cast<double>(k) + 0.5) * tau;

  double center = -tau / h2 + 1.0 + beta;
  if (k >= 1) center -= beta * weights.G(1);

  sys.rhs = center * uk.segment(1, m);
  sys.rhs += (tau / (2.0 * h2)) * (uk.segment(2, m) + uk.segment(0, m));

  if (k >= 1) {
    for (Index j = 1; j < k; ++j) {
      const double c = beta * (weights.G(k - j) - weights.G(k - j + 1));
      sys.rhs += c * history.levels[static_cast<std::size_t>(j)].segment(1, m);
    }
    sys.rhs += (beta * weights.G(k)) * history.levels[0].segment(1, m);
  }

  sys.rhs += (tau * beta * weights.M(k)) * history.psi;

  const double shift = tau * std::pow(t_half, 1.0 - alpha) / gamma_fn(2.0 - alpha);
  sys.rhs -= shift * history.psi;

  if (problem.source) {
    for (Index i = 1; i < grid.M; ++i) sys.rhs[i - 1] += tau * problem.source(grid.x(i), t_half);
  }
  return sys;
}

VecX thomas_solve(const TridiagonalSystem& system) {
  const Index m = system.diag.size();
  if (system.lower.size() != m || system.upper.size() != m || system.rhs.size() != m)
    throw std::domain_error("thomas_solve: inconsistent system sizes");

  VecX c(m), d(m), x(m);
  double pivot = system.diag[0];
  if (std::fabs(pivot) < 1e-300) throw std::runtime_error("thomas_solve: pivot breakdown");
  c[0] = system.upper[0] / pivot;
  d[0] = system.rhs[0] / pivot;
  for (Index i = 1; i < m; ++i) {
    pivot = system.diag[i] - system.lower[i] * c[i - 1];
    if (std::fabs(pivot) < 1e-300) throw std::runtime_error("thomas_solve: pivot breakdown");
    c[i] = system.upper[i] / pivot;
    d[i] = (system.rhs[i] - system.lower[i] * d[i - 1]) / pivot;
  }
  x[m - 1] = d[m - 1];
  for (Index i = m - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

SolutionHistory run_scheme(double alpha, const Grid& grid, const VecX& u0, const VecX& psi,
                           const std::function<double(double, double)>& source) {
  if (u0.size() != grid.M + 1) throw std::domain_error("run_scheme: u0 must span all nodes");
  if (psi.size() != grid.M - 1) throw std::domain_error("run_scheme: psi must span the interior");

  Problem shim;
  shim.length = grid.h * static_cast<double>(grid.M);
  shim.horizon = grid.tau * static_cast<double>(grid.N);
  shim.alpha = alpha;
  shim.source = source;
  validate_problem(shim, false);

  const WeightTable weights = build_weights(alpha, grid.N + 1);

  SolutionHistory history;
  history.levels.reserve(static_cast<std::size_t>(grid.N) + 1);
  history.levels.push_back(u0);
  history.psi = psi;

  for (Index k = 0; k < grid.N; ++k) {
    const TridiagonalSystem sys = assemble_step(k, history, weights, shim, grid);
    const VecX interior = thomas_solve(sys);
    VecX level = VecX::Zero(grid.M + 1);
    level.segment(1, grid.M - 1) = interior;
    history.levels.push_back(std::move(level));
  }
  return history;
}

SolutionHistory solve(const Problem& problem, const Grid& grid) {
  validate_problem(problem, true);
  if (!problem.source) throw std::domain_error("solve: source is required");
  if (std::fabs(grid.h * static_cast<double>(grid.M) - problem.length) > 1e-12 * problem.length ||
      std::fabs(grid.tau * static_cast<double>(grid.N) - problem.horizon) > 1e-12 * problem.horizon)
    throw std::domain_error("solve: grid does not tile the problem domain");

  const double margin = stability_margin(problem.alpha, grid.tau);
  if (margin < 0) {
    std::fprintf(stderr,
                 "warning: stability margin %.6g is negative for alpha=%.6g tau=%.6g\n",
                 margin, problem.alpha, grid.tau);
  }

  VecX u0(grid.M + 1);
  for (Index i = 0; i <= grid.M; ++i) u0[i] = problem.phi(grid.x(i));
  const VecX psi = compute_psi(problem, grid);
  return run_scheme(problem.alpha, grid, u0, psi, problem.source);
}

}  // namespace fracmim
