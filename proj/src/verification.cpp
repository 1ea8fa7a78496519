#include "fracmim/verification.hpp"

#include "fracmim/fractional.hpp"
#include "fracmim/parallel.hpp"
#include "fracmim/special_functions.hpp"
#include "fracmim/weights.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace fracmim {

double discrete_l2_norm(const VecX& v, double h) { return std::sqrt(h * v.squaredNorm()); }

Problem manufactured_source(int example_id, double alpha) {
  if (example_id != 1 && example_id != 2)
    throw std::domain_error("manufactured_source: example_id must be 1 or 2");
  if (!(alpha > 0 && alpha < 1))
    throw std::domain_error("manufactured_source: alpha must lie in (0,1)");

  Problem p;
  p.length = 1.0;
  p.horizon = 1.0;
  p.alpha = alpha;

  if (example_id == 1) {
    p.phi = [](double x) { return std::sin(M_PI * x); };
    p.phi_xx = [](double x) { return -M_PI * M_PI * std::sin(M_PI * x); };
    p.exact = [](double x, double t) { return std::exp(t) * std::sin(M_PI * x); };
    p.source = [alpha](double x, double t) {
      const double P = lower_incomplete_gamma_regularized(1.0 - alpha, t);
      return std::exp(t) * std::sin(M_PI * x) * (1.0 + M_PI * M_PI + P);
    };
  } else {
    auto S = [](double x) { return x * x * (1.0 - x) * (1.0 - x); };
    auto Sxx = [](double x) { return 2.0 - 12.0 * x + 12.0 * x * x; };
    p.phi = S;
    p.phi_xx = Sxx;
    p.exact = [S](double x, double t) { return std::exp(t) * S(x); };
    p.source = [alpha, S, Sxx](double x, double t) {
      const double P = lower_incomplete_gamma_regularized(1.0 - alpha, t);
      return std::exp(t) * (S(x) * (1.0 + P) - Sxx(x));
    };
  }
  return p;
}

namespace {

Index steps_to_count(double domain, double step, const char* what) {
  const double ratio = domain / step;
  const Index n = static_cast<Index>(std::llround(ratio));
  if (n < 1 || std::fabs(static_cast<double>(n) * step - domain) > 1e-9 * domain)
    throw std::domain_error(std::string("convergence_study: ") + what +
                            " step does not divide the domain evenly");
  return n;
}

}  // namespace

ConvergenceReport convergence_study(const Problem& problem, RefineAxis axis, double fixed_step,
                                    const std::vector<double>& steps) {
  if (!problem.exact) throw std::domain_error("convergence_study: problem needs an exact solution");
  if (steps.empty()) throw std::domain_error("convergence_study: steps must be nonempty");
  for (std::size_t r = 1; r < steps.size(); ++r)
    if (!(steps[r] < steps[r - 1]))
      throw std::domain_error("convergence_study: steps must be strictly decreasing");
  if (!(fixed_step > 0)) throw std::domain_error("convergence_study: fixed_step must be positive");

  ConvergenceReport report;
  report.alpha = problem.alpha;
  report.axis = axis;
  report.rows.resize(steps.size());

  parallel_for(static_cast<Index>(steps.size()), [&](Index r) {
    const double step = steps[static_cast<std::size_t>(r)];
    Index M, N;
    if (axis == RefineAxis::Space) {
      M = steps_to_count(problem.length, step, "space");
      N = steps_to_count(problem.horizon, fixed_step, "time");
    } else {
      M = steps_to_count(problem.length, fixed_step, "space");
      N = steps_to_count(problem.horizon, step, "time");
    }
    const Grid grid = make_grid(problem, M, N);
    const SolutionHistory history = solve(problem, grid);

    const VecX& last = history.levels.back();
    VecX diff(M - 1);
    for (Index i = 1; i < M; ++i)
      diff[i - 1] = last[i] - problem.exact(grid.x(i), problem.horizon);

    ConvergenceRow& row = report.rows[static_cast<std::size_t>(r)];
    row.h = grid.h;
    row.tau = grid.tau;
    row.error = discrete_l2_norm(diff, grid.h);
    row.rate = 0.0;
    row.has_rate = false;
  });

  for (std::size_t r = 1; r < steps.size(); ++r) {
    ConvergenceRow& row = report.rows[r];
    row.rate = std::log(report.rows[r - 1].error / row.error) / std::log(steps[r - 1] / steps[r]);
    row.has_rate = true;
  }
  return report;
}

ConvergenceReport convergence_study(int example_id, double alpha, RefineAxis axis,
                                    double fixed_step, const std::vector<double>& steps) {
  return convergence_study(manufactured_source(example_id, alpha), axis, fixed_step, steps);
}

TruncationReport truncation_probe(double alpha, const SmoothFunction& probe, double t_eval,
                                  const std::vector<double>& taus,
                                  const QuadratureConfig& reference_cfg) {
  if (!(alpha > 0 && alpha < 1))
    throw std::domain_error("truncation_probe: alpha must lie in (0,1)");
  if (!(t_eval > 0)) throw std::domain_error("truncation_probe: t_eval must be positive");
  if (probe.max_order() < 4)
    throw std::domain_error("truncation_probe: probe must register derivatives through order 4");
  if (taus.empty()) throw std::domain_error("truncation_probe: taus must be nonempty");

  const FractionalOrder order = FractionalOrder::sub_one(alpha);
  const double psi = probe.derivative(1, 0.0);

  TruncationReport report;
  report.alpha = alpha;
  report.t_eval = t_eval;
  report.rows.resize(taus.size());

  parallel_for(static_cast<Index>(taus.size()), [&](Index r) {
    const double tau = taus[static_cast<std::size_t>(r)];
    if (!(tau > 0)) throw std::domain_error("truncation_probe: taus must be positive");
    const double k_real = t_eval / tau - 0.5;
    const Index K = static_cast<Index>(std::llround(k_real));
    if (K < 0 || std::fabs((static_cast<double>(K) + 0.5) * tau - t_eval) > 1e-9 * t_eval)
      throw std::domain_error("truncation_probe: t_eval must sit on the half-step grid of every tau");

    const WeightTable weights = build_weights(alpha, K + 2);
    const double coeff = std::pow(tau, 1.0 - alpha) / gamma_fn(3.0 - alpha);

    VecX delta(K + 2);  // d_t u^j = (u^j - u^{j-1})/tau for j = 1..K+1
    double prev = probe(0.0);
    for (Index j = 1; j <= K + 1; ++j) {
      const double cur = probe(static_cast<double>(j) * tau);
      delta[j] = (cur - prev) / tau;
      prev = cur;
    }

    double max_err = 0.0, first_err = 0.0;
    for (Index k = 0; k <= K; ++k) {
      double acc = delta[k + 1];
      for (Index j = 1; j <= k; ++j)
        acc -= (weights.M(k - j) - weights.M(k - j + 1)) * delta[j];
      acc -= weights.M(k) * psi;
      const double discrete = coeff * acc;

      const double t_half = (static_cast<double>(k) + 0.5) * tau;
      const double continuous = tcaputo_eval(probe, order, t_half, reference_cfg);
      const double err = std::fabs(discrete - continuous);
      if (k == 0) first_err = err;
      if (err > max_err) max_err = err;
    }

    TruncationRow& row = report.rows[static_cast<std::size_t>(r)];
    row.tau = tau;
    row.max_error = max_err;
    row.first_step_error = first_err;
    row.observed_order = 0.0;
    row.has_order = false;
  });

  for (std::size_t r = 1; r < taus.size(); ++r) {
    TruncationRow& row = report.rows[r];
    const TruncationRow& prev = report.rows[r - 1];
    row.observed_order =
        std::log(prev.first_step_error / row.first_step_error) / std::log(prev.tau / row.tau);
    row.has_order = true;
  }
  return report;
}

double stability_probe(double alpha, const Grid& grid, const VecX& perturbation) {
  if (perturbation.size() != grid.M - 1)
    throw std::domain_error("stability_probe: perturbation must span the interior");

  const VecX psi = VecX::Zero(grid.M - 1);
  const VecX base0 = VecX::Zero(grid.M + 1);
  VecX pert0 = VecX::Zero(grid.M + 1);
  pert0.segment(1, grid.M - 1) = perturbation;

  const std::function<double(double, double)> no_source;
  const SolutionHistory base = run_scheme(alpha, grid, base0, psi, no_source);
  const SolutionHistory pert = run_scheme(alpha, grid, pert0, psi, no_source);

  const double rho0 = discrete_l2_norm(
      (pert.levels[0] - base.levels[0]).segment(1, grid.M - 1), grid.h);
  if (rho0 == 0.0) return 0.0;

  double max_ratio = 0.0;
  for (std::size_t k = 0; k < base.levels.size(); ++k) {
    const VecX rho = (pert.levels[k] - base.levels[k]).segment(1, grid.M - 1);
    const double ratio = discrete_l2_norm(rho, grid.h) / rho0;
    if (ratio > max_ratio) max_ratio = ratio;
  }
  return max_ratio;
}

double stability_probe(double alpha, const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  VecX delta(grid.M - 1);
  for (Index i = 0; i < grid.M - 1; ++i) {
    const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    delta[i] = 2.0 * u - 1.0;
  }
  return stability_probe(alpha, grid, delta);
}

}  // namespace fracmim
