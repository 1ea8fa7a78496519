#include "fracmim/verification.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "fracmim/fractional.hpp"

using namespace fracmim;

TEST_CASE("discrete norm") {
  CHECK(discrete_l2_norm(VecX::Zero(5), 0.1) == 0.0);
  CHECK(discrete_l2_norm(VecX::Ones(9), 0.1) ==
        doctest::Approx(0.94868329805051380).epsilon(1e-14));
  const Index m = 1000;
  VecX v(m - 1);
  for (Index i = 1; i < m; ++i)
    v[i - 1] = std::sin(M_PI * static_cast<double>(i) / static_cast<double>(m));
  CHECK(discrete_l2_norm(v, 1.0 / static_cast<double>(m)) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("benchmark problem construction") {
  const Problem p1 = manufactured_source(1, 0.5);
  CHECK(p1.phi(0.25) == doctest::Approx(std::sin(M_PI * 0.25)));
  CHECK(p1.source(0.5, 0.0) == doctest::Approx(10.869604401089359).epsilon(1e-13));
  CHECK(p1.exact(0.5, 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));

  const Problem p2 = manufactured_source(2, 0.5);
  CHECK(p2.phi(0.5) == doctest::Approx(0.0625));
  CHECK(p2.source(0.5, 0.0) == doctest::Approx(1.0625).epsilon(1e-13));

  CHECK_THROWS_AS(manufactured_source(3, 0.5), std::domain_error);
  CHECK_THROWS_AS(manufactured_source(1, 1.0), std::domain_error);
}

TEST_CASE("benchmark sources balance the transport equation") {
  // u = e^t S(x) must satisfy u_t + D^alpha u = u_xx + f, with the memory term
  // evaluated by independent quadrature
  std::mt19937_64 eng(314159);
  auto uniform = [&] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
  const SmoothFunction expf = SmoothFunction::exponential();
  const QuadratureConfig deep{256, 10, 1e-9};
  for (int id : {1, 2}) {
    for (double alpha : {0.3, 0.7}) {
      const Problem p = manufactured_source(id, alpha);
      const FractionalOrder order = FractionalOrder::sub_one(alpha);
      for (int trial = 0; trial < 20; ++trial) {
        const double x = 0.05 + 0.9 * uniform();
        const double t = 0.05 + 0.95 * uniform();
        const double S = p.phi(x);
        const double Sxx = p.phi_xx(x);
        const double cap = S * caputo_eval(expf, order, t, deep);
        const double resid =
            std::exp(t) * S + cap - std::exp(t) * Sxx - p.source(x, t);
        CHECK(std::fabs(resid) <= 1e-6);
      }
    }
  }
}

TEST_CASE("convergence study reproduces a preserved steady state") {
  Problem p;
  p.length = 1.0;
  p.horizon = 1.0;
  p.alpha = 0.5;
  p.phi = [](double x) { return x * (1.0 - x); };
  p.phi_xx = [](double) { return -2.0; };
  p.source = [](double, double) { return 2.0; };
  p.exact = [](double x, double) { return x * (1.0 - x); };

  const ConvergenceReport report =
      convergence_study(p, RefineAxis::Time, 0.125, {0.125, 0.0625});
  REQUIRE(report.rows.size() == 2);
  CHECK_FALSE(report.rows[0].has_rate);
  CHECK(report.rows[1].has_rate);
  for (const ConvergenceRow& row : report.rows) {
    CHECK(row.h == doctest::Approx(0.125));
    CHECK(row.error <= 1e-10);
  }
  CHECK(report.rows[0].tau == doctest::Approx(0.125));
  CHECK(report.rows[1].tau == doctest::Approx(0.0625));
}

TEST_CASE("rates use the actual step ratio") {
  const ConvergenceReport report =
      convergence_study(1, 0.5, RefineAxis::Time, 0.002, {0.1, 1.0 / 30.0});
  REQUIRE(report.rows.size() == 2);
  const double expected =
      std::log(report.rows[0].error / report.rows[1].error) / std::log(3.0);
  CHECK(report.rows[1].rate == doctest::Approx(expected).epsilon(1e-12));
  CHECK(report.rows[1].rate == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("study input validation") {
  const Problem p = manufactured_source(1, 0.5);
  CHECK_THROWS_AS(convergence_study(p, RefineAxis::Time, 0.125, {}), std::domain_error);
  CHECK_THROWS_AS(convergence_study(p, RefineAxis::Time, 0.125, {0.0625, 0.125}),
                  std::domain_error);
  CHECK_THROWS_AS(convergence_study(p, RefineAxis::Time, 0.125, {0.3}), std::domain_error);
  CHECK_THROWS_AS(convergence_study(p, RefineAxis::Time, 0.3, {0.125}), std::domain_error);
  Problem q = p;
  q.exact = nullptr;
  CHECK_THROWS_AS(convergence_study(q, RefineAxis::Time, 0.125, {0.125}), std::domain_error);
}

TEST_CASE("time-refined error at the reference resolution") {
  const ConvergenceReport report =
      convergence_study(1, 0.5, RefineAxis::Time, 1.0 / 2000.0, {0.125});
  REQUIRE(report.rows.size() == 1);
  CHECK_FALSE(report.rows[0].has_rate);
  CHECK(report.rows[0].error == doctest::Approx(3.5156e-3).epsilon(0.05));
}

TEST_CASE("memory operator is exact on linear histories") {
  const TruncationReport report =
      truncation_probe(0.5, SmoothFunction::monomial(1), 1.0, {2.0 / 9.0, 2.0 / 19.0});
  for (const TruncationRow& row : report.rows) {
    CHECK(row.max_error <= 1e-12);
    CHECK(row.first_step_error <= 1e-12);
  }
}

TEST_CASE("first-step defect of the cubic carries the kernel signature") {
  struct Frozen {
    double alpha;
    double errs[3];
  };
  const std::vector<double> taus = {2.0 / 9.0, 2.0 / 19.0, 2.0 / 159.0};
  const std::vector<Frozen> cases = {
      {0.1, {0.0050453261753201961, 0.00057783930938506755, 1.2193850468674327e-6}},
      {0.5, {0.010082212579955261, 0.0015569623881741701, 7.6854502029257885e-6}},
      {0.9, {0.013541866395624952, 0.0028197151162624858, 3.2557708725316767e-5}},
  };
  for (const Frozen& c : cases) {
    const TruncationReport report =
        truncation_probe(c.alpha, SmoothFunction::monomial(3), 1.0, taus);
    REQUIRE(report.rows.size() == 3);
    for (std::size_t r = 0; r < 3; ++r) {
      CHECK(report.rows[r].first_step_error ==
            doctest::Approx(c.errs[r]).epsilon(1e-9));
    }
    CHECK_FALSE(report.rows[0].has_order);
    for (std::size_t r = 1; r < 3; ++r) {
      REQUIRE(report.rows[r].has_order);
      CHECK(std::fabs(report.rows[r].observed_order - (3.0 - c.alpha)) <= 1e-6);
    }
  }
}

TEST_CASE("first-step defect of the exponential") {
  const std::vector<double> taus = {2.0 / 9.0, 2.0 / 19.0, 2.0 / 39.0, 2.0 / 79.0,
                                    2.0 / 159.0};
  const double frozen[5] = {0.0081880897940276626, 0.0018617504994475948,
                            0.00046162497753582346, 0.00011911041862689606,
                            3.1326421457613920e-5};
  const TruncationReport report =
      truncation_probe(0.1, SmoothFunction::exponential(), 1.0, taus);
  REQUIRE(report.rows.size() == 5);
  for (std::size_t r = 0; r < 5; ++r) {
    CHECK(report.rows[r].first_step_error == doctest::Approx(frozen[r]).epsilon(1e-5));
  }
  for (std::size_t r = 1; r < 5; ++r) {
    CHECK(report.rows[r].max_error < report.rows[r - 1].max_error);
    CHECK(report.rows[r].first_step_error < report.rows[r - 1].first_step_error);
  }
  CHECK(report.rows[4].observed_order >= 1.88);
  CHECK(report.rows[4].observed_order <= 1.94);
}

TEST_CASE("probe validation") {
  CHECK_THROWS_AS(truncation_probe(0.5, SmoothFunction::monomial(3), 1.0, {0.25}),
                  std::domain_error);
  CHECK_THROWS_AS(truncation_probe(1.5, SmoothFunction::monomial(3), 1.0, {2.0 / 9.0}),
                  std::domain_error);
  CHECK_THROWS_AS(truncation_probe(0.5, SmoothFunction::monomial(3), 1.0, {}),
                  std::domain_error);
  const SmoothFunction shallow(3, [](int, double) { return 0.0; });
  CHECK_THROWS_AS(truncation_probe(0.5, shallow, 1.0, {2.0 / 9.0}), std::domain_error);
}

TEST_CASE("perturbations never grow") {
  Problem p;
  p.length = 1.0;
  p.horizon = 1.0;
  p.alpha = 0.5;
  const Grid g = make_grid(p, 64, 100);
  CHECK(stability_probe(0.5, g, VecX::Zero(63)) == 0.0);
  const double ratio = stability_probe(0.5, g, 12345u);
  CHECK(ratio >= 1.0);
  CHECK(ratio <= 1.0 + 1e-12);

  Problem q = p;
  q.horizon = 1.0;
  const Grid g2 = make_grid(q, 16, 2000);
  const double long_ratio = stability_probe(0.9, g2, 999u);
  CHECK(long_ratio >= 1.0);
  CHECK(long_ratio <= 1.0 + 1e-12);
}
