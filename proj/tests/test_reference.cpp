#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nashadmm/admm.hpp"
#include "nashadmm/diagnostics.hpp"
#include "nashadmm/presets.hpp"
#include "nashadmm/reference.hpp"
#include "support.hpp"

using namespace nashadmm;

namespace {

QuadraticGame box_game(double r0) {
  Eigen::Matrix2d q;
  q << 2, 1, 1, 2;
  return QuadraticGame(q, Eigen::Vector2d(r0, 0), {{-1, 1}, {-1, 1}});
}

}  // namespace

TEST_CASE("oracle on the two-firm game") {
  const auto game = support::two_firm();
  const auto res = centralized_ne(game, 0.2);
  CHECK(std::abs(res.x(0) - 2.25) < 1e-9);
  CHECK(std::abs(res.x(1) - 2.25) < 1e-9);
  CHECK(res.step_validated);
  CHECK(res.residual < 1e-12);
  CHECK_THROWS_AS(centralized_ne(game, 0.3), ParameterError);
  CHECK_THROWS_AS(centralized_ne(game, 0.0), ParameterError);
}

TEST_CASE("oracle on box-constrained games") {
  const auto zero = centralized_ne_auto(box_game(0.0));
  CHECK(zero.x.lpNorm<Eigen::Infinity>() < 1e-12);

  const auto game = box_game(-3.0);
  const auto res = centralized_ne_auto(game);
  const oracle::Matrix q{{2, 1}, {1, 2}};
  const oracle::Vector r{-3, 0}, lo{-1, -1}, hi{1, 1};
  const auto grid = oracle::grid_ne_2d(q, r, lo, hi, 1e-4, 0.1);
  CHECK(std::abs(res.x(0) - grid[0]) <= 1e-4);
  CHECK(std::abs(res.x(1) - grid[1]) <= 1e-4);
  CHECK(ne_residual(res.x, game, 0.1) < 1e-8);
  CHECK(oracle::natural_residual(q, r, lo, hi, support::to_vec(res.x), 0.1) < 1e-8);
}

TEST_CASE("oracle non-convergence reports the last residual") {
  try {
    (void)centralized_ne(support::two_firm(), 0.01, 1e-12, 3);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK(e.iterations() == 3);
    CHECK(e.last_residual() > 0.0);
  }
}

TEST_CASE("oracle idempotence and agreement with best response") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto game = support::random_cournot(5 + seed, 2 + seed % 3, 900 + seed);
    const auto res = centralized_ne_auto(game, 1e-13);
    const auto again = centralized_ne(game, game.constants()->mu / std::pow(game.constants()->theta0, 2), 1e-13,
                                      10'000'000, res.x);
    CHECK((again.x - res.x).lpNorm<Eigen::Infinity>() < 1e-13);
    CHECK(again.iterations <= 1);

    oracle::Vector lo, hi;
    for (std::size_t i = 0; i < game.n_players(); ++i) {
      lo.push_back(game.action_interval(i).lo);
      hi.push_back(game.action_interval(i).hi);
    }
    const auto br = oracle::best_response_ne(support::to_rows(game.q()), support::to_vec(game.r()), lo, hi);
    for (std::size_t i = 0; i < game.n_players(); ++i) CHECK(std::abs(res.x(static_cast<Eigen::Index>(i)) - br[i]) < 1e-10);
  }
}

TEST_CASE("step schedules") {
  const auto d = StepSchedule::diminishing(2.0, 3.0);
  CHECK(d.at(1) == doctest::Approx(0.5));
  CHECK(d.is_diminishing());
  CHECK(StepSchedule::constant(0.1).at(1000) == 0.1);
  CHECK_THROWS_AS(StepSchedule::diminishing(0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(StepSchedule::diminishing(1.0, 0.5), ParameterError);
  CHECK_THROWS_AS(StepSchedule::constant(-1.0), ParameterError);
}

TEST_CASE("baseline fixed point and mixing-free reduction") {
  const auto game = support::two_firm();
  const auto g = support::k2();
  StoppingRule stop;
  stop.max_iterations = 5;
  stop.tolerance = 0.0;
  Eigen::VectorXd star(4);
  star << 2.25, 2.25, 2.25, 2.25;
  const auto fixed = baseline_consensus_gradient(game, g, StepSchedule::diminishing(1, 1), 0.3,
                                                 initial_state(game, star), stop);
  CHECK((fixed.final_state.x - star).lpNorm<Eigen::Infinity>() < 1e-14);

  Eigen::VectorXd x(4);
  x << 1.0, 0.5, 1.0, 0.5;
  stop.max_iterations = 1;
  const auto one = baseline_consensus_gradient(game, g, StepSchedule::diminishing(1, 1), 0.3,
                                               initial_state(game, x), stop);
  const Eigen::Vector2d f = game.q() * Eigen::Vector2d(1.0, 0.5) + game.r();
  CHECK(one.final_state.estimate(0, 0) == doctest::Approx(1.0 - 0.5 * f(0)).epsilon(1e-14));
  CHECK(one.final_state.estimate(1, 1) == doctest::Approx(0.5 - 0.5 * f(1)).epsilon(1e-14));
  CHECK(one.final_state.estimate(0, 1) == doctest::Approx(0.5));
  CHECK(one.trace.back().dual_sum_norm == 0.0);
  CHECK(one.trace.back().delta_z_phi == 0.0);
}

TEST_CASE("baseline mixing weight range") {
  const auto game = support::two_firm();
  const auto init = initial_state(game, InitSpec{});
  CHECK_THROWS_AS(baseline_consensus_gradient(game, support::k2(), StepSchedule::diminishing(1, 1), 0.5, init, {}),
                  ParameterError);
  CHECK_THROWS_AS(baseline_consensus_gradient(game, support::k2(), StepSchedule::diminishing(1, 1), 0.0, init, {}),
                  ParameterError);
}

TEST_CASE("baseline stays feasible") {
  const auto game = support::random_cournot(7, 3, 12);
  const auto g = presets::random_connected_graph(7, 3, 13);
  auto state = initial_state(game, InitSpec{Interval{0, 1}, {-2, 3}, 14});
  StoppingRule stop;
  stop.max_iterations = 1;
  for (int k = 0; k < 200; ++k) {
    state = baseline_consensus_gradient(game, g, StepSchedule::diminishing(3, 1), 0.9 / (g.max_degree() + 1.0), state, stop).final_state;
    for (std::size_t i = 0; i < 7; ++i) CHECK(game.action_interval(i).contains(state.estimate(i, i)));
  }
  CHECK(state.iteration == 200);
}

TEST_CASE("baseline is much slower than ADMM on two firms") {
  const auto game = support::two_firm();
  const auto g = support::k2();
  const auto init = initial_state(game, InitSpec{std::nullopt, {0, 1}, 5});
  StoppingRule stop;
  stop.tolerance = 1e-6;
  stop.max_iterations = 10'000'000;
  stop.target = Eigen::Vector2d(2.25, 2.25);
  const auto admm = run(game, g, AdmmParams::uniform(1.0, 13.0, 10.0, 2), init, stop);
  const auto base = baseline_consensus_gradient(game, g, StepSchedule::diminishing(1, 1), 0.45, init, stop);
  REQUIRE(admm.converged);
  REQUIRE(base.converged);
  MESSAGE("ADMM " << admm.iterations << " iterations, baseline " << base.iterations);
  CHECK((base.final_state.actions() - Eigen::Vector2d(2.25, 2.25)).lpNorm<Eigen::Infinity>() < 1e-6);
  CHECK(base.iterations >= 10 * admm.iterations);
}
