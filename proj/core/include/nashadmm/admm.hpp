#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nashadmm/diagnostics.hpp"
#include "nashadmm/games.hpp"
#include "nashadmm/graph.hpp"
#include "nashadmm/rng.hpp"
#include "nashadmm/theory.hpp"

namespace nashadmm {

/// Every player's estimate block x^i and dual block w^i, stacked player by
/// player into vectors of length N^2 (x[i*N + j] is player i's estimate of
/// player j's action).
struct AugmentedState {
  std::size_t n = 0;
  Eigen::VectorXd x;
  Eigen::VectorXd w;
  std::size_t iteration = 0;

  static AugmentedState zeros(std::size_t n);

  auto block(std::size_t i) { return x.segment(static_cast<Eigen::Index>(i * n), static_cast<Eigen::Index>(n)); }
  auto block(std::size_t i) const {
    return x.segment(static_cast<Eigen::Index>(i * n), static_cast<Eigen::Index>(n));
  }
  auto dual(std::size_t i) { return w.segment(static_cast<Eigen::Index>(i * n), static_cast<Eigen::Index>(n)); }
  auto dual(std::size_t i) const {
    return w.segment(static_cast<Eigen::Index>(i * n), static_cast<Eigen::Index>(n));
  }
  double& estimate(std::size_t i, std::size_t j) { return x(static_cast<Eigen::Index>(i * n + j)); }
  double estimate(std::size_t i, std::size_t j) const { return x(static_cast<Eigen::Index>(i * n + j)); }
  /// [x_i^i]_i.
  Eigen::VectorXd actions() const { return own_actions(x, n); }
};

/// Solver step failure; wraps the game's DomainError with context.
class StepError : public std::runtime_error {
 public:
  StepError(const std::string& what, std::size_t iteration, std::size_t player, std::size_t link)
      : std::runtime_error(what), iteration_(iteration), player_(player), link_(link) {}
  std::size_t iteration() const noexcept { return iteration_; }
  std::size_t player() const noexcept { return player_; }
  std::size_t link() const noexcept { return link_; }

 private:
  std::size_t iteration_;
  std::size_t player_;
  std::size_t link_;
};

/// Initial estimates. Own actions default to the interval midpoint; the other
/// estimates are drawn uniformly from `others` on a seeded stream.
struct InitSpec {
  std::optional<Interval> own;  ///< drawn then clamped into Omega_i; midpoint when absent.
  Interval others{0.0, 1.0};
  std::uint64_t seed = 0;
};

AugmentedState initial_state(const GameModel& game, const InitSpec& spec);

/// State with the given estimate blocks and zero duals. Own entries must lie
/// in Omega_i.
AugmentedState initial_state(const GameModel& game, const Eigen::VectorXd& stacked_estimates);

class ThreadPool;

/// One synchronous iteration, player by player. Duals are refreshed from the
/// k-1 snapshot first, then every estimate block is updated from the k-1
/// snapshot and the fresh duals.
AugmentedState step(const AugmentedState& state, const GameModel& game, const CommGraph& g,
                    const AdmmParams& params, ThreadPool* pool = nullptr);

/// The same iteration written with stacked operators L kron I_N, R and the
/// diagonal (B + 2 c_bar D) kron I_N.
AugmentedState step_vectorized(const AugmentedState& state, const GameModel& game, const CommGraph& g,
                               const AdmmParams& params);

/// N^2 x N matrix R whose block i is e_i.
Eigen::MatrixXd selection_operator(std::size_t n);
/// L kron I_N.
Eigen::MatrixXd stacked_laplacian(const CommGraph& g);

struct StoppingRule {
  double tolerance = 1e-8;
  std::size_t max_iterations = 1'000'000;
  /// When set, stop once ||actions - target||_inf < tolerance instead of the
  /// residual test ||x(k) - x(k-1)||_inf + consensus_residual < tolerance.
  std::optional<Eigen::VectorXd> target;
};

struct RunOptions {
  std::size_t record_every = 1;
  std::size_t threads = 1;
  /// Reference equilibrium for rel_error.
  std::optional<Eigen::VectorXd> oracle;
  /// Extra ConditionFlag bits to stamp on every trace row.
  std::uint32_t flags = 0;
  /// Called with the state of every recorded row, after the row is stored.
  std::function<void(const AugmentedState&)> on_record;
};

struct RunResult {
  AugmentedState final_state;
  std::vector<IterationTrace> trace;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Iterates `step` from `init` until the stopping rule fires. Rows are
/// recorded at k = 0, every record_every iterations, and at the final
/// iteration. Throws GraphError for a disconnected graph; StepError carries
/// the failing iteration.
RunResult run(const GameModel& game, const CommGraph& g, const AdmmParams& params, const AugmentedState& init,
              const StoppingRule& stop, const RunOptions& options = {});

}  // namespace nashadmm
