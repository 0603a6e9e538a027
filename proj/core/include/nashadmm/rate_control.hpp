#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nashadmm/games.hpp"

namespace nashadmm {

/// Parameters of the multi-link rate-control game.
struct RateControlNetwork {
  /// m_links x N, entry (j, i) = 1 iff link j lies on user i's route.
  Eigen::MatrixXi incidence;
  Eigen::VectorXd capacities;  ///< C_j > 0.
  double kappa = 10.0;         ///< network-wide congestion weight.
  Eigen::VectorXd chi;         ///< user-specific utility weights, > 0.
  double max_rate = 10.0;      ///< Omega_i = [0, max_rate].
};

/// J_i(y) = sum_{j in R_i} kappa / (C_j - load_j(y)) - chi_i log(y_i + 1),
/// load_j(y) = sum_{w : j in R_w} y_w.
///
/// The cost has a pole at each link capacity; gradients are only evaluated
/// while every link on the route keeps slack >= 1e-9 C_j.
class RateControlGame : public GameModel {
 public:
  static constexpr double kSlackFraction = 1e-9;

  explicit RateControlGame(RateControlNetwork network);

  std::size_t n_players() const override { return users_; }
  Interval action_interval(std::size_t) const override { return {0.0, network_.max_rate}; }
  double partial_gradient(std::size_t i, std::span<const double> y) const override;
  double cost(std::size_t i, std::span<const double> y) const override;
  std::string_view kind() const override { return "rate-control"; }

  const RateControlNetwork& network() const noexcept { return network_; }
  const std::vector<std::size_t>& route(std::size_t i) const { return routes_.at(i); }
  const std::vector<std::size_t>& link_users(std::size_t j) const { return link_users_.at(j); }
  std::size_t n_links() const noexcept { return link_users_.size(); }

  /// Smallest slack C_j - load_j over all links.
  double min_slack(std::span<const double> y) const;

 private:
  double link_load(std::size_t j, std::span<const double> y) const;
  double checked_slack(std::size_t i, std::size_t j, std::span<const double> y) const;

  RateControlNetwork network_;
  std::size_t users_ = 0;
  std::vector<std::vector<std::size_t>> routes_;
  std::vector<std::vector<std::size_t>> link_users_;
};

}  // namespace nashadmm
