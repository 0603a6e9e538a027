#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "nashadmm/admm.hpp"
#include "nashadmm/games.hpp"
#include "nashadmm/graph.hpp"

namespace nashadmm {

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double last_residual, std::size_t iterations)
      : std::runtime_error(what), last_residual_(last_residual), iterations_(iterations) {}
  double last_residual() const noexcept { return last_residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double last_residual_;
  std::size_t iterations_;
};

struct OracleResult {
  Eigen::VectorXd x;
  std::size_t iterations = 0;
  double residual = 0.0;  ///< final natural residual at step tau.
  /// False when the game has no certified constants, so tau < 2 mu / theta0^2
  /// could not be checked.
  bool step_validated = false;
};

/// Centralized projected pseudo-gradient iteration x <- T_Omega(x - tau F(x))
/// from the interval midpoints, until ||dx||_inf < tol. Throws ParameterError
/// when certified constants show tau >= 2 mu / theta0^2 and
/// NonConvergenceError after max_iter iterations.
OracleResult centralized_ne(const GameModel& game, double tau, double tol = 1e-12,
                            std::size_t max_iter = 10'000'000,
                            const std::optional<Eigen::VectorXd>& start = std::nullopt);

/// Same with tau = mu / theta0^2 from the game's certified constants.
OracleResult centralized_ne_auto(const GameModel& game, double tol = 1e-12, std::size_t max_iter = 10'000'000);

/// Step-size schedule for the consensus-gradient baseline.
class StepSchedule {
 public:
  static StepSchedule constant(double tau);
  /// alpha_k = a / (k + b), a > 0, b >= 1.
  static StepSchedule diminishing(double a, double b);

  double at(std::size_t k) const noexcept {
    return diminishing_ ? a_ / (static_cast<double>(k) + b_) : a_;
  }
  bool is_diminishing() const noexcept { return diminishing_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

 private:
  StepSchedule(bool diminishing, double a, double b) : diminishing_(diminishing), a_(a), b_(b) {}
  bool diminishing_;
  double a_;
  double b_;
};

/// Synchronous consensus + projected-gradient baseline. Per iteration k >= 1:
/// v^i = x^i + gamma sum_{j in N_i} (x^j - x^i); x_i^i = T(v_i^i - alpha_k
/// d_i J_i(v^i)); x_{-i}^i = v_{-i}^i. Requires 0 < gamma < 1/(d* + 1).
/// There are no duals, so dual_sum_norm and delta_z_phi are recorded as 0.
RunResult baseline_consensus_gradient(const GameModel& game, const CommGraph& g, const StepSchedule& schedule,
                                      double gamma, const AugmentedState& init, const StoppingRule& stop,
                                      const RunOptions& options = {});

}  // namespace nashadmm
