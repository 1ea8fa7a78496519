#pragma once

#include "fracmim/solver.hpp"
#include "fracmim/types.hpp"

#include <cstdint>
#include <vector>

namespace fracmim {

enum class RefineAxis { Space, Time };

struct ConvergenceRow {
  double h;
  double tau;
  double error;       // discrete L2 error at the final time
  double rate;        // log(e_prev/e_cur)/log(step_prev/step_cur)
  bool has_rate;      // false on the first row
};

struct ConvergenceReport {
  double alpha;
  RefineAxis axis;
  std::vector<ConvergenceRow> rows;
};

struct TruncationRow {
  double tau;
  double max_error;        // max |discrete operator - continuous value| over the grid
  double first_step_error; // same difference at the first half-step t_{1/2}
  double observed_order;   // from successive first_step_error pairs
  bool has_order;
};

// The operator's pointwise error at a fixed evaluation time is dominated by an
// O(tau^2) accumulation over the interior panels, so the max column converges
// at second order for any 0<alpha<1. The kernel signature 3-alpha survives
// only in the first half-step remainder, which is what the order column
// tracks.
struct TruncationReport {
  double alpha;
  double t_eval;
  std::vector<TruncationRow> rows;
};

// sqrt(sum_i h v_i^2) over the interior values v.
double discrete_l2_norm(const VecX& v, double h);

// Benchmark problems on (0,1)x(0,1] with exact solution e^t S(x):
// id 1 has S = sin(pi x), id 2 has S = x^2 (1-x)^2. The source is
// f(x,t) = e^t (S(x)(1 + P(1-alpha,t)) - S''(x)), which makes e^t S(x) solve
// the transport equation exactly. Analytic phi_xx and exact are attached.
Problem manufactured_source(int example_id, double alpha);

// One solve per step size; the non-refined axis is held at fixed_step. Steps
// must be strictly decreasing and divide the domain evenly. Solves fan out
// across worker threads; rows keep the input order.
ConvergenceReport convergence_study(const Problem& problem, RefineAxis axis, double fixed_step,
                                    const std::vector<double>& steps);
ConvergenceReport convergence_study(int example_id, double alpha, RefineAxis axis,
                                    double fixed_step, const std::vector<double>& steps);

// Applies the discrete memory operator
//   (tau^{1-alpha}/Gamma(3-alpha)) [ M_0 d_t u^{k+1}
//       - sum_{j=1}^k (M_{k-j} - M_{k-j+1}) d_t u^j - M_k psi ],
// psi = u'(0), d_t u^j = (u^j - u^{j-1})/tau, to exact samples of the probe at
// every half-step t_{k+1/2} <= t_eval and compares against the continuous
// transformed-Caputo value at the same instants. Each tau must place t_eval on
// the half-step grid: t_eval = (K + 1/2) tau for integer K. The probe needs
// derivatives registered through order 4.
TruncationReport truncation_probe(double alpha, const SmoothFunction& probe, double t_eval,
                                  const std::vector<double>& taus,
                                  const QuadratureConfig& reference_cfg = {256, 8, 1e-10});

// Runs two f == 0 schemes sharing the same psi whose initial data differ by a
// seeded uniform perturbation of the interior nodes, and returns
// max_k ||rho^k||_2 / ||rho^0||_2 for the difference rho. A zero perturbation
// returns 0 by convention.
double stability_probe(double alpha, const Grid& grid, std::uint64_t seed);
double stability_probe(double alpha, const Grid& grid, const VecX& perturbation);

}  // namespace fracmim
