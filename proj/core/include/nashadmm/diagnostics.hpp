#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nashadmm/games.hpp"
#include "nashadmm/graph.hpp"
#include "nashadmm/theory.hpp"

namespace nashadmm {

/// Bits of IterationTrace::condition_flags.
enum ConditionFlag : std::uint32_t {
  kConditionUnverified = 1u << 0,  ///< beta condition or c0 > c_min failed.
  kSampledConstants = 1u << 1,     ///< constants are sampled estimates, not exact.
  kNoOracle = 1u << 2,             ///< rel_error unavailable.
};

/// One recorded iteration. Norms are infinity norms unless stated.
struct IterationTrace {
  std::size_t k = 0;
  /// ||x(k) - x*||_2 / ||x(0) - x*||_2 over the action vector; NaN without an oracle.
  double rel_error = 0.0;
  /// x^T (L kron I_N) x = sum over edges of ||x^i - x^j||_2^2.
  double consensus_residual = 0.0;
  /// ||sum_i w^i||_inf.
  double dual_sum_norm = 0.0;
  /// ||x(k) - x(k-1)||_inf; 0 at k = 0.
  double delta_x_norm = 0.0;
  /// ||z(k-1) - z(k)||^2 in the Phi-weighted norm; 0 at k = 0.
  double delta_z_phi = 0.0;
  /// k * delta_z_phi.
  double rate_product = 0.0;
  std::uint32_t condition_flags = 0;

  friend bool operator==(const IterationTrace&, const IterationTrace&) = default;
};

class UnsupportedTraceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Blockwise edge sum of ||x^i - x^j||^2.
double consensus_residual(const Eigen::VectorXd& stacked, const CommGraph& g);

/// ||sum_i w^i||_inf.
double dual_sum_norm(const Eigen::VectorXd& stacked_duals, std::size_t n);

/// ||dx||^2_{H kron I} + c x(k)^T (L kron I) x(k), using q(k) - q(k-1) = x(k).
double phi_weighted_difference(const Eigen::VectorXd& previous, const Eigen::VectorXd& current,
                               const AdmmParams& params, const CommGraph& g);
/// Same, with H = B + 2 c_bar D - c L precomputed.
double phi_weighted_difference(const Eigen::VectorXd& previous, const Eigen::VectorXd& current,
                               const Eigen::MatrixXd& h, double c, const CommGraph& g);

/// (k, delta_z_phi) for k >= 1. Requires a contiguous trace (recorded every
/// iteration); throws UnsupportedTraceError on gaps.
std::vector<std::pair<std::size_t, double>> lyapunov_difference_series(const std::vector<IterationTrace>& trace);

/// True when every element is <= its predecessor + slack.
bool is_non_increasing(const std::vector<std::pair<std::size_t, double>>& series, double slack);

/// max of f over the first and last quarter of the trace (by position).
struct QuartileMaxima {
  double first = 0.0;
  double last = 0.0;
};
QuartileMaxima quartile_maxima(const std::vector<IterationTrace>& trace, double (*metric)(const IterationTrace&));

/// k * consensus_residual, the o(1/k) rate surrogate.
double consensus_rate_product(const IterationTrace& t);

/// ||x - T_Omega(x - tau F(x))||_inf; zero exactly at a Nash equilibrium.
double ne_residual(const Eigen::VectorXd& x, const GameModel& game, double tau);

struct MonotonicityProbe {
  double min_margin = 0.0;
  std::size_t violations = 0;  ///< margins below -1e-9.
  double mu_bar = 0.0;
};

/// Samples stacked x uniform over [lo, hi]^{N^2} and y = 1 kron y0 with y0
/// uniform over [lo, hi]^N, and reports
/// (x - y)^T (R F(x) - R F(y) + c0 L(x - y)) - mu_bar ||x - y||^2.
MonotonicityProbe restricted_monotonicity_probe(const QuadraticGame& game, const CommGraph& g, double c0,
                                                std::size_t n_samples, std::uint64_t seed, double lo = -1.0,
                                                double hi = 1.0);

/// Single-pair margin used by the probe.
double restricted_monotonicity_margin(const GameModel& game, const CommGraph& g, double c0, double mu_bar,
                                      const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Builds trace rows while a solver runs.
class TraceRecorder {
 public:
  /// `params` may be null for solvers without ADMM weights (delta_z_phi = 0).
  TraceRecorder(const CommGraph& g, const AdmmParams* params, std::optional<Eigen::VectorXd> oracle,
                const Eigen::VectorXd& initial_actions, std::uint32_t flags);

  IterationTrace make(std::size_t k, const Eigen::VectorXd& previous_x, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& w) const;

 private:
  const CommGraph& g_;
  std::optional<Eigen::MatrixXd> h_;
  double c_ = 0.0;
  std::optional<Eigen::VectorXd> oracle_;
  double initial_error_ = 0.0;
  std::uint32_t flags_;
};

/// Own actions [x_i^i] of a stacked estimate vector.
Eigen::VectorXd own_actions(const Eigen::VectorXd& stacked, std::size_t n);

}  // namespace nashadmm
