#include "nashadmm/admm.hpp"

#include <algorithm>
#include <memory>

#include "nashadmm/thread_pool.hpp"

namespace nashadmm {

AugmentedState AugmentedState::zeros(std::size_t n) {
  AugmentedState s;
  s.n = n;
  s.x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n * n));
  s.w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n * n));
  return s;
}

AugmentedState initial_state(const GameModel& game, const InitSpec& spec) {
  const auto n = game.n_players();
  if (!(spec.others.lo <= spec.others.hi)) throw ParameterError("init range for estimates is empty");
  auto state = AugmentedState::zeros(n);
  auto own_rng = Rng::stream(spec.seed, StreamPurpose::kInitialization, 0);
  auto other_rng = Rng::stream(spec.seed, StreamPurpose::kInitialization, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto omega = game.action_interval(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      state.estimate(i, j) = other_rng.uniform(spec.others.lo, spec.others.hi);
    }
    state.estimate(i, i) = spec.own ? omega.clamp(own_rng.uniform(spec.own->lo, spec.own->hi)) : omega.midpoint();
  }
  return state;
}

AugmentedState initial_state(const GameModel& game, const Eigen::VectorXd& stacked_estimates) {
  const auto n = game.n_players();
  if (static_cast<std::size_t>(stacked_estimates.size()) != n * n) {
    throw ParameterError("initial estimates must have N^2 entries");
  }
  auto state = AugmentedState::zeros(n);
  state.x = stacked_estimates;
  for (std::size_t i = 0; i < n; ++i) {
    if (!game.action_interval(i).contains(state.estimate(i, i))) {
      throw ParameterError("initial action of player " + std::to_string(i + 1) + " lies outside its interval");
    }
  }
  return state;
}

namespace {

void check_shapes(const AugmentedState& state, const GameModel& game, const CommGraph& g) {
  const auto n = game.n_players();
  if (g.size() != n || state.n != n) throw std::invalid_argument("game, graph and state sizes differ");
  const auto nn = static_cast<Eigen::Index>(n * n);
  if (state.x.size() != nn || state.w.size() != nn) throw std::invalid_argument("state vectors must have N^2 entries");
}

[[noreturn]] void rethrow_as_step_error(const DomainError& e, std::size_t iteration) {
  throw StepError("iteration " + std::to_string(iteration) + ", player " + std::to_string(e.player() + 1) + ": " +
                      e.what(),
                  iteration, e.player(), e.link());
}

}  // namespace

AugmentedState step(const AugmentedState& state, const GameModel& game, const CommGraph& g,
                    const AdmmParams& params, ThreadPool* pool) {
  check_shapes(state, game, g);
  const auto n = state.n;
  const auto len = static_cast<Eigen::Index>(n);
  const double c = params.c;
  const double c_bar = params.c_bar();
  const auto next_iteration = state.iteration + 1;

  AugmentedState next;
  next.n = n;
  next.x.resize(state.x.size());
  next.w.resize(state.w.size());
  next.iteration = next_iteration;

  auto agent = [&](std::size_t i) {
    const auto offset = static_cast<Eigen::Index>(i * n);
    const auto xi = state.x.segment(offset, len);
    const auto& nbrs = g.neighbors(i);
    const double deg = static_cast<double>(nbrs.size());
    const double beta = params.beta[i];
    const double alpha = beta + 2.0 * c_bar * deg;

    // Sum of neighbor blocks from the k-1 snapshot.
    Eigen::VectorXd neighbor_sum = Eigen::VectorXd::Zero(len);
    for (auto j : nbrs) neighbor_sum += state.x.segment(static_cast<Eigen::Index>(j * n), len);

    // Step 5: dual ascent.
    auto wi = next.w.segment(offset, len);
    wi = state.w.segment(offset, len) + c * (deg * xi - neighbor_sum);

    double gradient = 0.0;
    try {
      gradient = game.partial_gradient(i, {state.x.data() + offset, n});
    } catch (const DomainError& e) {
      rethrow_as_step_error(e, next_iteration);
    }

    // sum_j (x^i + x^j) over neighbors.
    const Eigen::VectorXd pair_sum = deg * xi + neighbor_sum;

    // Step 7 for every coordinate, then Step 6 overwrites the own action.
    auto out = next.x.segment(offset, len);
    out = (beta * xi + c_bar * pair_sum - wi) / alpha;
    const auto own = static_cast<Eigen::Index>(i);
    const double raw = (-gradient - wi(own) + beta * xi(own) + c_bar * pair_sum(own)) / alpha;
    out(own) = game.action_interval(i).clamp(raw);
  };

  if (pool != nullptr) {
    pool->parallel_for(n, agent);
  } else {
    for (std::size_t i = 0; i < n; ++i) agent(i);
  }
  return next;
}

Eigen::MatrixXd selection_operator(std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(nn * nn, nn);
  for (Eigen::Index i = 0; i < nn; ++i) r(i * nn + i, i) = 1.0;
  return r;
}

Eigen::MatrixXd stacked_laplacian(const CommGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const Eigen::MatrixXd l = g.laplacian();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (l(i, j) != 0.0) out.block(i * n, j * n, n, n) = l(i, j) * Eigen::MatrixXd::Identity(n, n);
    }
  }
  return out;
}

AugmentedState step_vectorized(const AugmentedState& state, const GameModel& game, const CommGraph& g,
                               const AdmmParams& params) {
  check_shapes(state, game, g);
  const auto n = state.n;
  const auto nn = static_cast<Eigen::Index>(n * n);
  const Eigen::MatrixXd big_l = stacked_laplacian(g);
  const Eigen::MatrixXd r = selection_operator(n);

  // Diagonal of (B + 2 c_bar D) kron I_N.
  const Eigen::VectorXd alpha = params.alpha(g);
  Eigen::VectorXd weights(nn);
  for (std::size_t i = 0; i < n; ++i) {
    weights.segment(static_cast<Eigen::Index>(i * n), static_cast<Eigen::Index>(n)).setConstant(alpha(static_cast<Eigen::Index>(i)));
  }

  AugmentedState next;
  next.n = n;
  next.iteration = state.iteration + 1;
  const Eigen::VectorXd lx = big_l * state.x;
  next.w = state.w + params.c * lx;

  Eigen::VectorXd f;
  try {
    f = extended_pseudo_gradient(game, state.x);
  } catch (const DomainError& e) {
    rethrow_as_step_error(e, next.iteration);
  }

  // 0 in R(F(x(k-1)) + G(x(k))) + w(k) + W (x(k) - x(k-1)) + c_bar L x(k-1):
  // the resolvent of the interval indicator is the clamp, applied only on the
  // rows R selects.
  const Eigen::VectorXd forward = r * f + next.w + params.c_bar() * lx;
  next.x = state.x - forward.cwiseQuotient(weights);
  const Eigen::VectorXd selected = r.transpose() * next.x;
  Eigen::VectorXd clamped(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    clamped(static_cast<Eigen::Index>(i)) = game.action_interval(i).clamp(selected(static_cast<Eigen::Index>(i)));
  }
  next.x += r * (clamped - selected);
  return next;
}

namespace {

std::uint32_t theory_flags(const GameModel& game, const CommGraph& g, const AdmmParams& params) {
  std::optional<GameConstants> k;
  try {
    k = game.constants();
  } catch (const InvalidGameError&) {
    return kConditionUnverified;
  }
  if (!k) return 0;
  try {
    return theory_constants(*k, g, params).condition_satisfied ? 0u : kConditionUnverified;
  } catch (const ParameterError&) {
    return kConditionUnverified;
  }
}

}  // namespace

RunResult run(const GameModel& game, const CommGraph& g, const AdmmParams& params, const AugmentedState& init,
              const StoppingRule& stop, const RunOptions& options) {
  const auto n = game.n_players();
  if (g.size() != n) throw std::invalid_argument("graph and game sizes differ");
  if (!g.is_connected()) throw GraphError("communication graph must be connected");
  params.validate(n);
  if (options.record_every == 0) throw ParameterError("record_every must be >= 1");
  if (stop.target && static_cast<std::size_t>(stop.target->size()) != n) {
    throw ParameterError("stopping target must have N entries");
  }
  check_shapes(init, game, g);

  std::unique_ptr<ThreadPool> pool;
  if (options.threads > 1) pool = std::make_unique<ThreadPool>(std::min(options.threads, n));

  const std::uint32_t flags = options.flags | theory_flags(game, g, params);
  TraceRecorder recorder(g, &params, options.oracle, init.actions(), flags);

  RunResult result;
  result.final_state = init;
  result.trace.push_back(recorder.make(init.iteration, init.x, init.x, init.w));
  if (options.on_record) options.on_record(init);

  auto& current = result.final_state;
  for (std::size_t it = 0; it < stop.max_iterations; ++it) {
    AugmentedState next = step(current, game, g, params, pool.get());
    const double dx = (next.x - current.x).lpNorm<Eigen::Infinity>();
    bool done = false;
    if (stop.target) {
      done = (next.actions() - *stop.target).lpNorm<Eigen::Infinity>() < stop.tolerance;
    } else {
      done = dx + consensus_residual(next.x, g) < stop.tolerance;
    }
    const bool record = done || it + 1 == stop.max_iterations || next.iteration % options.record_every == 0;
    if (record) result.trace.push_back(recorder.make(next.iteration, current.x, next.x, next.w));
    current = std::move(next);
    if (record && options.on_record) options.on_record(current);
    ++result.iterations;
    if (done) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace nashadmm
