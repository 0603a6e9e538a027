#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "nashadmm/admm.hpp"
#include "nashadmm/diagnostics.hpp"
#include "nashadmm/presets.hpp"
#include "nashadmm/reference.hpp"
#include "support.hpp"

using namespace nashadmm;

TEST_CASE("consensus residual") {
  const auto g = support::k2();
  Eigen::VectorXd x(4);
  x << 0.3, -2, 0.3, -2;
  CHECK(consensus_residual(x, g) == 0.0);
  x << 1, 0, 0, 0;
  CHECK(consensus_residual(x, g) == doctest::Approx(1.0));

  auto rng = Rng::stream(1, StreamPurpose::kProbe, 10);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + rng.below(9);
    const auto gr = presets::random_connected_graph(n, rng.below(n), 500 + t);
    const auto xs = support::uniform_vector(rng, static_cast<Eigen::Index>(n * n), -2, 2);
    const double quad = xs.dot(stacked_laplacian(gr) * xs);
    CHECK(std::abs(consensus_residual(xs, gr) - quad) < 1e-12 * std::max(1.0, quad));
  }
}

TEST_CASE("dual sum norm") {
  Eigen::VectorXd w(4);
  w << 1, -2, -1, 2.5;
  CHECK(dual_sum_norm(w, 2) == doctest::Approx(0.5));
  CHECK_THROWS(dual_sum_norm(Eigen::VectorXd(), 2));
}

TEST_CASE("Lyapunov difference series") {
  const auto game = support::two_firm();
  const auto g = support::k2();
  Eigen::VectorXd star(4);
  star << 2.25, 2.25, 2.25, 2.25;
  StoppingRule stop;
  stop.max_iterations = 10;
  stop.tolerance = 0.0;
  const auto fixed = run(game, g, AdmmParams::uniform(1, 13, 10, 2), initial_state(game, star), stop);
  const auto zeros = lyapunov_difference_series(fixed.trace);
  CHECK(zeros.size() == 10);
  for (const auto& [k, v] : zeros) CHECK(v == 0.0);

  RunOptions sparse;
  sparse.record_every = 3;
  const auto gappy = run(game, g, AdmmParams::uniform(1, 13, 10, 2), initial_state(game, star), stop, sparse);
  CHECK_THROWS_AS(lyapunov_difference_series(gappy.trace), UnsupportedTraceError);
}

TEST_CASE("Lyapunov differences decrease under the parameter conditions") {
  const auto game = support::two_firm();
  const auto g = support::k2();
  const auto k = cournot_constants(game);
  const double c = 1.0, c0 = 12.0;
  const double mb = mu_bar(k.mu, k.theta, k.theta0, 2, g.algebraic_connectivity(), c0);
  const double tb = theta_bar(k.theta, c0, g.max_degree());
  const double beta = beta_for_condition(g, c, c0, tb, mb);
  const auto p = AdmmParams::uniform(c, c0, beta, 2);
  const auto t = theory_constants(k, g, p);
  REQUIRE(t.condition_satisfied);

  StoppingRule stop;
  stop.tolerance = 1e-12;
  stop.max_iterations = 200'000;
  const auto r = run(game, g, p, initial_state(game, InitSpec{Interval{0, 5}, {0, 5}, 8}), stop);
  CHECK(r.converged);
  const auto series = lyapunov_difference_series(r.trace);
  CHECK(is_non_increasing(series, 1e-12));

  // k * delta_z_phi over the second half of the run
  std::vector<std::pair<std::size_t, double>> tail;
  for (std::size_t i = r.trace.size() / 2; i < r.trace.size(); ++i) tail.emplace_back(r.trace[i].k, r.trace[i].rate_product);
  CHECK(is_non_increasing(tail, 1e-12));
  const auto q = quartile_maxima(r.trace, consensus_rate_product);
  CHECK(q.last < q.first);
}

TEST_CASE("phi-weighted difference") {
  const auto g = support::k2();
  const auto p = AdmmParams::uniform(1.0, 2.0, 3.0, 2);
  Eigen::VectorXd a(4), b(4);
  a << 1, 2, 3, 4;
  b << 0, 1, 1, 2;
  const Eigen::VectorXd d = b - a;
  const Eigen::MatrixXd hbig = Eigen::kroneckerProduct(p.proximal_weight_matrix(g), Eigen::MatrixXd::Identity(2, 2));
  const double expected = d.dot(hbig * d) + p.c * consensus_residual(b, g);
  CHECK(phi_weighted_difference(a, b, p, g) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("restricted monotonicity probe") {
  const auto game = support::two_firm();
  const auto g = support::k2();
  const auto k = cournot_constants(game);
  Eigen::VectorXd x(4);
  x << 0.1, 0.2, 0.3, 0.4;
  CHECK(restricted_monotonicity_margin(game, g, 5.0, 0.1, x, x) == 0.0);

  const double c0 = 2.0 * c_min(k.theta, k.theta0, k.mu, g.algebraic_connectivity());
  const auto probe = restricted_monotonicity_probe(game, g, c0, 1000, 3);
  CHECK(probe.violations == 0);
  CHECK(probe.mu_bar > 0.0);
  CHECK(probe.min_margin >= -1e-9);

  Eigen::Matrix2d q;
  q << 3, 2.9, 2.9, 3;
  const QuadraticGame coupled(q, Eigen::Vector2d::Zero(), {{-1, 1}, {-1, 1}});
  const auto loose = restricted_monotonicity_probe(coupled, g, 0.0, 1000, 4);
  CHECK(loose.violations > 0);
}

TEST_CASE("natural residual") {
  const auto game = support::two_firm();
  CHECK(ne_residual(Eigen::Vector2d(2.25, 2.25), game, 0.1) < 1e-12);
  CHECK(ne_residual(Eigen::Vector2d(0, 0), game, 0.1) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK_THROWS_AS(ne_residual(Eigen::Vector2d(0, 0), game, 0.0), ParameterError);

  Eigen::Matrix2d q;
  q << 2, 1, 1, 2;
  const QuadraticGame box(q, Eigen::Vector2d(-3, 0), {{-1, 1}, {-1, 1}});
  const auto grid = oracle::grid_ne_2d({{2, 1}, {1, 2}}, {-3, 0}, {-1, -1}, {1, 1}, 1e-4, 0.1);
  CHECK(ne_residual(Eigen::Vector2d(grid[0], grid[1]), box, 0.1) < 1e-8);
}

TEST_CASE("trace rows") {
  const auto game = support::two_firm();
  const auto g = support::k2();
  const auto init = initial_state(game, InitSpec{std::nullopt, {0, 1}, 2});
  StoppingRule stop;
  stop.max_iterations = 5;
  stop.tolerance = 0.0;
  const auto p = AdmmParams::uniform(1, 13, 10, 2);
  const auto no_oracle = run(game, g, p, init, stop);
  CHECK(std::isnan(no_oracle.trace[0].rel_error));
  CHECK(no_oracle.trace.size() == 6);

  RunOptions opts;
  opts.oracle = Eigen::Vector2d(2.25, 2.25);
  opts.flags = kSampledConstants;
  const auto with_oracle = run(game, g, p, init, stop, opts);
  CHECK(with_oracle.trace[0].rel_error == doctest::Approx(1.0));
  CHECK(with_oracle.trace[0].delta_x_norm == 0.0);
  CHECK(with_oracle.trace[0].delta_z_phi == 0.0);
  for (const auto& t : with_oracle.trace) {
    CHECK((t.condition_flags & kSampledConstants) != 0);
    CHECK(t.rate_product == doctest::Approx(static_cast<double>(t.k) * t.delta_z_phi));
    CHECK(t.consensus_residual >= 0.0);
  }
  CHECK(with_oracle.trace[3].rel_error < 1.0);
}

TEST_CASE("quartile maxima") {
  std::vector<IterationTrace> tr(8);
  for (std::size_t i = 0; i < 8; ++i) {
    tr[i].k = i;
    tr[i].consensus_residual = 1.0 / static_cast<double>((i + 1) * (i + 1));
  }
  const auto q = quartile_maxima(tr, consensus_rate_product);
  CHECK(q.first == doctest::Approx(0.25));
  CHECK(q.last == doctest::Approx(std::max(6.0 / 49, 7.0 / 64)));
  CHECK_THROWS_AS(quartile_maxima(std::vector<IterationTrace>(3), consensus_rate_product), UnsupportedTraceError);
}
