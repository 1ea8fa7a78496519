#pragma once

#include "fracmim/types.hpp"
#include "fracmim/weights.hpp"

#include <functional>
#include <vector>

namespace fracmim {

// Mobile/immobile transport problem on (0,L)x(0,T] with homogeneous Dirichlet
// boundaries: u_t + D_t^alpha u = u_xx + f, u(x,0) = phi(x). phi_xx and exact
// are optional; an analytic phi_xx sharpens the psi computation and exact
// enables error reporting.
struct Problem {
  double length = 1.0;
  double horizon = 1.0;
  double alpha = 0.5;
  std::function<double(double)> phi;
  std::function<double(double, double)> source;
  std::function<double(double)> phi_xx;        // optional
  std::function<double(double, double)> exact; // optional
};

struct Grid {
  Index M = 2;  // spatial intervals, >= 2
  Index N = 1;  // time steps, >= 1
  double h = 0.5;
  double tau = 1.0;

  double x(Index i) const { return static_cast<double>(i) * h; }
  double t(Index k) const { return static_cast<double>(k) * tau; }
};

Grid make_grid(const Problem& problem, Index M, Index N);

// Per-step tridiagonal system over interior nodes i = 1..M-1. diag exceeds
// |lower|+|upper| by construction (diag = tau/h^2 + 1 + beta, off-diagonals
// -tau/(2h^2)).
struct TridiagonalSystem {
  VecX lower;
  VecX diag;
  VecX upper;
  VecX rhs;
};

// Full record of the time levels; levels[k] spans nodes 0..M with boundary
// entries pinned to zero for k >= 1 (level 0 is phi sampled at the nodes).
// psi spans the interior nodes.
struct SolutionHistory {
  std::vector<VecX> levels;
  VecX psi;
};

// psi_i = phi_xx(x_i) + f(x_i, 0), preferring the analytic phi_xx and falling
// back to the second-order central difference of phi.
VecX compute_psi(const Problem& problem, const Grid& grid);

// Builds the system advancing level k to k+1. The memory block multiplies
// beta = tau^{1-alpha}/Gamma(3-alpha):
//   rhs_i = (tau/(2h^2))(U^k_{i+1} + U^k_{i-1})
//         + (-tau/h^2 + 1 + beta - beta G_1 [k>=1]) U^k_i
//         + beta sum_{j=1}^{k-1} (G_{k-j} - G_{k-j+1}) U^j_i
//         + beta G_k U^0_i [k>=1]
//         + tau beta M_k psi_i
//         + tau f(x_i, t_{k+1/2})
//         - tau psi_i ((k+1/2) tau)^{1-alpha} / Gamma(2-alpha)
// The history sum runs in fixed ascending j order.
TridiagonalSystem assemble_step(Index k, const SolutionHistory& history,
                                const WeightTable& weights, const Problem& problem,
                                const Grid& grid);

// Thomas elimination. Throws if a forward-elimination pivot falls below
// 1e-300 in magnitude, which cannot happen for systems out of assemble_step.
VecX thomas_solve(const TridiagonalSystem& system);

// Low-level time loop: advances u0 (all nodes) under the given psi (interior)
// and source (may be empty for f == 0). The stability experiments feed both
// runs the same psi so their difference obeys the homogeneous recursion.
SolutionHistory run_scheme(double alpha, const Grid& grid, const VecX& u0, const VecX& psi,
                           const std::function<double(double, double)>& source);

// Full solve: validates the problem, computes psi, checks the stability
// margin (warning only; tau <= 1 always passes), and advances N steps.
SolutionHistory solve(const Problem& problem, const Grid& grid);

}  // namespace fracmim
