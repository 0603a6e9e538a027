#include "nashadmm/reference.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "nashadmm/thread_pool.hpp"

namespace nashadmm {

OracleResult centralized_ne(const GameModel& game, double tau, double tol, std::size_t max_iter,
                            const std::optional<Eigen::VectorXd>& start) {
  if (!(tau > 0.0)) throw ParameterError("oracle step tau must be > 0");
  OracleResult out;
  std::optional<GameConstants> k;
  try {
    k = game.constants();
  } catch (const InvalidGameError&) {
    k.reset();
  }
  if (k) {
    const double limit = 2.0 * k->mu / (k->theta0 * k->theta0);
    if (!(tau < limit)) {
      throw ParameterError("oracle step tau = " + std::to_string(tau) + " must be < 2 mu / theta0^2 = " +
                           std::to_string(limit));
    }
    out.step_validated = true;
  }

  const auto n = game.n_players();
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  if (start) {
    x = project_actions(game, *start);
  } else {
    for (std::size_t i = 0; i < n; ++i) x(static_cast<Eigen::Index>(i)) = game.action_interval(i).midpoint();
  }
  double change = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd next = project_actions(game, x - tau * pseudo_gradient(game, x));
    change = (next - x).lpNorm<Eigen::Infinity>();
    x = next;
    ++out.iterations;
    if (change < tol) {
      out.x = x;
      out.residual = ne_residual(x, game, tau);
      return out;
    }
  }
  throw NonConvergenceError("centralized oracle did not converge in " + std::to_string(max_iter) +
                                " iterations (last step " + std::to_string(change) + ")",
                            change, out.iterations);
}

OracleResult centralized_ne_auto(const GameModel& game, double tol, std::size_t max_iter) {
  const auto k = game.constants();
  if (!k) throw ParameterError("default oracle step needs certified game constants; pass tau explicitly");
  return centralized_ne(game, k->mu / (k->theta0 * k->theta0), tol, max_iter);
}

StepSchedule StepSchedule::constant(double tau) {
  if (!(tau > 0.0)) throw ParameterError("constant step must be > 0");
  return StepSchedule(false, tau, 0.0);
}

StepSchedule StepSchedule::diminishing(double a, double b) {
  if (!(a > 0.0)) throw ParameterError("diminishing schedule needs a > 0");
  if (!(b >= 1.0)) throw ParameterError("diminishing schedule needs b >= 1");
  return StepSchedule(true, a, b);
}

RunResult baseline_consensus_gradient(const GameModel& game, const CommGraph& g, const StepSchedule& schedule,
                                      double gamma, const AugmentedState& init, const StoppingRule& stop,
                                      const RunOptions& options) {
  const auto n = game.n_players();
  if (g.size() != n || init.n != n) throw std::invalid_argument("game, graph and state sizes differ");
  if (!g.is_connected()) throw GraphError("communication graph must be connected");
  if (!(gamma > 0.0) || !(gamma < 1.0 / (static_cast<double>(g.max_degree()) + 1.0))) {
    throw ParameterError("mixing weight gamma must lie in (0, 1/(d*+1))");
  }
  if (options.record_every == 0) throw ParameterError("record_every must be >= 1");

  std::unique_ptr<ThreadPool> pool;
  if (options.threads > 1) pool = std::make_unique<ThreadPool>(std::min(options.threads, n));

  TraceRecorder recorder(g, nullptr, options.oracle, init.actions(), options.flags);
  RunResult result;
  result.final_state = init;
  result.final_state.w = Eigen::VectorXd();
  result.trace.push_back(recorder.make(init.iteration, init.x, init.x, result.final_state.w));
  if (options.on_record) options.on_record(result.final_state);

  const auto len = static_cast<Eigen::Index>(n);
  auto& current = result.final_state;
  Eigen::VectorXd next_x(current.x.size());
  for (std::size_t it = 0; it < stop.max_iterations; ++it) {
    const auto k = current.iteration + 1;
    const double step_size = schedule.at(k);
    auto agent = [&](std::size_t i) {
      const auto offset = static_cast<Eigen::Index>(i * n);
      const auto xi = current.x.segment(offset, len);
      auto v = next_x.segment(offset, len);
      v = xi;
      for (auto j : g.neighbors(i)) v += gamma * (current.x.segment(static_cast<Eigen::Index>(j * n), len) - xi);
      double gradient = 0.0;
      try {
        gradient = game.partial_gradient(i, {next_x.data() + offset, n});
      } catch (const DomainError& e) {
        throw StepError("baseline iteration " + std::to_string(k) + ", player " + std::to_string(e.player() + 1) +
                            ": " + e.what(),
                        k, e.player(), e.link());
      }
      const auto own = static_cast<Eigen::Index>(i);
      v(own) = game.action_interval(i).clamp(v(own) - step_size * gradient);
    };
    if (pool) {
      pool->parallel_for(n, agent);
    } else {
      for (std::size_t i = 0; i < n; ++i) agent(i);
    }

    const double dx = (next_x - current.x).lpNorm<Eigen::Infinity>();
    bool done = false;
    if (stop.target) {
      done = (own_actions(next_x, n) - *stop.target).lpNorm<Eigen::Infinity>() < stop.tolerance;
    } else {
      done = dx + consensus_residual(next_x, g) < stop.tolerance;
    }
    const bool record = done || it + 1 == stop.max_iterations || k % options.record_every == 0;
    if (record) result.trace.push_back(recorder.make(k, current.x, next_x, current.w));
    current.x.swap(next_x);
    current.iteration = k;
    ++result.iterations;
    if (record && options.on_record) options.on_record(current);
    if (done) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace nashadmm
