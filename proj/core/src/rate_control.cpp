#include "nashadmm/rate_control.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace nashadmm {

RateControlGame::RateControlGame(RateControlNetwork network) : network_(std::move(network)) {
  const auto& inc = network_.incidence;
  const auto links = inc.rows();
  users_ = static_cast<std::size_t>(inc.cols());
  if (links == 0 || users_ == 0) throw InvalidGameError("incidence matrix is empty");
  if (network_.capacities.size() != links) throw InvalidGameError("one capacity per link is required");
  if (static_cast<std::size_t>(network_.chi.size()) != users_) {
    throw InvalidGameError("one chi per user is required");
  }
  if (!(network_.kappa > 0.0)) throw InvalidGameError("kappa must be > 0");
  if ((network_.capacities.array() <= 0.0).any()) throw InvalidGameError("capacities must be > 0");
  if ((network_.chi.array() <= 0.0).any()) throw InvalidGameError("chi must be > 0");
  if (!(network_.max_rate > 0.0) || !std::isfinite(network_.max_rate)) {
    throw InvalidGameError("max_rate must be finite and > 0");
  }

  routes_.assign(users_, {});
  link_users_.assign(static_cast<std::size_t>(links), {});
  for (Eigen::Index j = 0; j < links; ++j) {
    for (Eigen::Index i = 0; i < inc.cols(); ++i) {
      const int v = inc(j, i);
      if (v != 0 && v != 1) throw InvalidGameError("incidence entries must be 0 or 1");
      if (v == 1) {
        routes_[static_cast<std::size_t>(i)].push_back(static_cast<std::size_t>(j));
        link_users_[static_cast<std::size_t>(j)].push_back(static_cast<std::size_t>(i));
      }
    }
  }
  for (std::size_t i = 0; i < users_; ++i) {
    if (routes_[i].empty()) throw InvalidGameError("user " + std::to_string(i + 1) + " has an empty route");
  }
}

double RateControlGame::link_load(std::size_t j, std::span<const double> y) const {
  double load = 0.0;
  for (auto w : link_users_[j]) load += y[w];
  return load;
}

double RateControlGame::checked_slack(std::size_t i, std::size_t j, std::span<const double> y) const {
  const double cap = network_.capacities(static_cast<Eigen::Index>(j));
  const double slack = cap - link_load(j, y);
  if (!(slack >= kSlackFraction * cap)) {
    throw DomainError("link " + std::to_string(j + 1) + " capacity exhausted (slack " +
                          std::to_string(slack) + ") while evaluating user " + std::to_string(i + 1),
                      i, j);
  }
  return slack;
}

double RateControlGame::partial_gradient(std::size_t i, std::span<const double> y) const {
  if (y.size() != users_) throw std::invalid_argument("rate-control profile has wrong length");
  if (!(y[i] > -1.0)) {
    throw DomainError("user " + std::to_string(i + 1) + " rate must exceed -1 for the log utility", i);
  }
  double congestion = 0.0;
  for (auto j : routes_[i]) {
    const double slack = checked_slack(i, j, y);
    congestion += network_.kappa / (slack * slack);
  }
  return congestion - network_.chi(static_cast<Eigen::Index>(i)) / (y[i] + 1.0);
}

double RateControlGame::cost(std::size_t i, std::span<const double> y) const {
  if (!(y[i] > -1.0)) {
    throw DomainError("user " + std::to_string(i + 1) + " rate must exceed -1 for the log utility", i);
  }
  double congestion = 0.0;
  for (auto j : routes_[i]) congestion += network_.kappa / checked_slack(i, j, y);
  return congestion - network_.chi(static_cast<Eigen::Index>(i)) * std::log(y[i] + 1.0);
}

double RateControlGame::min_slack(std::span<const double> y) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < link_users_.size(); ++j) {
    best = std::min(best, network_.capacities(static_cast<Eigen::Index>(j)) - link_load(j, y));
  }
  return best;
}

}  // namespace nashadmm
