#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace nashadmm {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double clamp(double v) const noexcept { return v < lo ? lo : (v > hi ? hi : v); }
  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
  double midpoint() const noexcept { return 0.5 * (lo + hi); }
};

/// Strong-monotonicity modulus mu of F, Lipschitz constant theta0 of F and
/// Lipschitz constant theta of the extended pseudo-gradient.
struct GameConstants {
  double mu = 0.0;
  double theta0 = 0.0;
  double theta = 0.0;
};

class InvalidGameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Gradient evaluated outside the cost's domain (e.g. a saturated link).
class DomainError : public std::domain_error {
 public:
  static constexpr std::size_t kNoLink = static_cast<std::size_t>(-1);

  DomainError(const std::string& what, std::size_t player, std::size_t link = kNoLink)
      : std::domain_error(what), player_(player), link_(link) {}

  /// 0-based player whose gradient was requested.
  std::size_t player() const noexcept { return player_; }
  /// 0-based link index, or kNoLink when the violation is not link-related.
  std::size_t link() const noexcept { return link_; }

 private:
  std::size_t player_;
  std::size_t link_;
};

/// N-player game with scalar actions on closed intervals.
///
/// partial_gradient(i, y) is the derivative of J_i with respect to its own
/// action, evaluated at an arbitrary profile y in R^N; this is what lets the
/// same model serve both the pseudo-gradient (y = x) and the extended
/// pseudo-gradient (y = player i's estimate block).
class GameModel {
 public:
  virtual ~GameModel() = default;

  virtual std::size_t n_players() const = 0;
  virtual Interval action_interval(std::size_t i) const = 0;
  virtual double partial_gradient(std::size_t i, std::span<const double> y) const = 0;
  virtual double cost(std::size_t i, std::span<const double> y) const = 0;
  /// Exact constants when the model can certify them.
  virtual std::optional<GameConstants> constants() const { return std::nullopt; }
  virtual std::string_view kind() const = 0;
};

/// F(x) = [d_i J_i(x)]_i.
Eigen::VectorXd pseudo_gradient(const GameModel& game, const Eigen::VectorXd& x);

/// [d_i J_i(x^i)]_i where x^i is the i-th length-N block of `stacked`.
Eigen::VectorXd extended_pseudo_gradient(const GameModel& game, const Eigen::VectorXd& stacked);

inline double project_action(const GameModel& game, std::size_t i, double v) {
  return game.action_interval(i).clamp(v);
}

/// Component-wise projection onto the product of action intervals.
Eigen::VectorXd project_actions(const GameModel& game, const Eigen::VectorXd& x);

/// Game with affine pseudo-gradient F(x) = Qx + r on a box.
///
/// J_i(x) = Q_ii x_i^2 / 2 + x_i sum_{j != i} Q_ij x_j + r_i x_i.
class QuadraticGame : public GameModel {
 public:
  QuadraticGame(Eigen::MatrixXd q, Eigen::VectorXd r, std::vector<Interval> intervals);

  std::size_t n_players() const override { return static_cast<std::size_t>(r_.size()); }
  Interval action_interval(std::size_t i) const override { return intervals_.at(i); }
  double partial_gradient(std::size_t i, std::span<const double> y) const override;
  double cost(std::size_t i, std::span<const double> y) const override;
  /// mu = lambda_min((Q + Q^T)/2), theta0 = theta = ||Q||_2. Throws
  /// InvalidGameError when mu <= 0.
  std::optional<GameConstants> constants() const override;
  std::string_view kind() const override { return "quadratic"; }

  const Eigen::MatrixXd& q() const noexcept { return q_; }
  const Eigen::VectorXd& r() const noexcept { return r_; }
  const std::vector<Interval>& intervals() const noexcept { return intervals_; }

 protected:
  Eigen::MatrixXd q_;
  Eigen::VectorXd r_;
  std::vector<Interval> intervals_;
};

/// Market data of a networked Nash-Cournot game with linear inverse demand
/// P = P_bar - Z A x and quadratic production cost
/// c_i(x_i) = n_i^2 q_i x_i^2 + n_i b_i x_i.
struct CournotMarkets {
  Eigen::MatrixXd participation;     ///< m x N, 0/1; column i is A_i.
  Eigen::VectorXd price_intercepts;  ///< P_bar, length m, > 0.
  Eigen::VectorXd price_slopes;      ///< z, length m, > 0.
  Eigen::VectorXd cost_quad;         ///< q, length N, > 0.
  Eigen::VectorXd cost_lin;          ///< b, length N.
  Eigen::VectorXd upper_bounds;      ///< per-market supply bound of each firm; Omega_i = [0, hi_i].
  /// Divide each J_i by 2 n_i^2 q_i so that every own-curvature term of the
  /// production cost becomes 1.
  bool normalize = false;
};

class CournotGame : public QuadraticGame {
 public:
  explicit CournotGame(CournotMarkets markets);

  double cost(std::size_t i, std::span<const double> y) const override;
  std::string_view kind() const override { return "cournot"; }

  const CournotMarkets& markets() const noexcept { return markets_; }
  /// n_i, number of markets firm i supplies.
  const Eigen::VectorXd& markets_per_firm() const noexcept { return n_; }
  /// Positive factor each J_i is divided by (1 when not normalized).
  double cost_scale(std::size_t i) const { return scale_(static_cast<Eigen::Index>(i)); }
  /// Q = Sigma + A^T Z A and r = [n_i b_i] - A^T P_bar before normalization.
  const Eigen::MatrixXd& raw_q() const noexcept { return raw_q_; }
  const Eigen::VectorXd& raw_r() const noexcept { return raw_r_; }

 private:
  struct Algebra;
  static Algebra compute_algebra(const CournotMarkets& markets);
  CournotGame(const CournotMarkets& markets, Algebra algebra);

  CournotMarkets markets_;
  Eigen::MatrixXd raw_q_;
  Eigen::VectorXd raw_r_;
  Eigen::VectorXd n_;
  Eigen::VectorXd scale_;
};

/// Exact (mu, theta0, theta) of a Cournot game.
GameConstants cournot_constants(const CournotGame& game);

}  // namespace nashadmm
