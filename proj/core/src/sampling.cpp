#include "nashadmm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace nashadmm {

Eigen::MatrixXd pseudo_gradient_jacobian(const GameModel& game, const Eigen::VectorXd& x) {
  const auto n = static_cast<Eigen::Index>(game.n_players());
  Eigen::MatrixXd jac(n, n);
  Eigen::VectorXd plus = x;
  Eigen::VectorXd minus = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(x(j)));
    plus(j) = x(j) + h;
    minus(j) = x(j) - h;
    jac.col(j) = (pseudo_gradient(game, plus) - pseudo_gradient(game, minus)) / (2.0 * h);
    plus(j) = x(j);
    minus(j) = x(j);
  }
  return jac;
}

SampledConstants estimate_constants_sampled(const GameModel& game, const DomainSampler& sampler,
                                            std::size_t n_samples) {
  SampledConstants out;
  double mu = std::numeric_limits<double>::infinity();
  double theta0 = 0.0;
  double theta = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const Eigen::VectorXd x = sampler(s);
    Eigen::MatrixXd jac;
    try {
      jac = pseudo_gradient_jacobian(game, x);
    } catch (const DomainError&) {
      ++out.skipped;
      continue;
    }
    ++out.used;
    const Eigen::MatrixXd sym = 0.5 * (jac + jac.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
    mu = std::min(mu, eig.eigenvalues()(0));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    theta0 = std::max(theta0, svd.singularValues()(0));
    theta = std::max(theta, jac.rowwise().norm().maxCoeff());
  }
  if (out.used == 0) mu = std::numeric_limits<double>::quiet_NaN();
  out.constants = GameConstants{mu, theta0, theta};
  return out;
}

DomainSampler uniform_box_sampler(const GameModel& game, Rng rng) {
  auto state = std::make_shared<Rng>(rng);
  return [&game, state](std::size_t) {
    const auto n = game.n_players();
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto iv = game.action_interval(i);
      x(static_cast<Eigen::Index>(i)) = state->uniform(iv.lo, iv.hi);
    }
    return x;
  };
}

DomainSampler uniform_box_sampler(std::size_t n, Interval box, Rng rng) {
  if (!(box.lo < box.hi)) throw std::invalid_argument("sampling box must satisfy lo < hi");
  auto state = std::make_shared<Rng>(rng);
  return [n, box, state](std::size_t) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (auto& v : x) v = state->uniform(box.lo, box.hi);
    return x;
  };
}

DomainSampler grid_sampler(const GameModel& game, std::size_t points_per_axis) {
  if (points_per_axis < 2) throw std::invalid_argument("grid_sampler needs at least two points per axis");
  return [&game, points_per_axis](std::size_t s) {
    const auto n = game.n_players();
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto iv = game.action_interval(i);
      const auto digit = s % points_per_axis;
      s /= points_per_axis;
      x(static_cast<Eigen::Index>(i)) =
          iv.lo + (iv.hi - iv.lo) * static_cast<double>(digit) / static_cast<double>(points_per_axis - 1);
    }
    return x;
  };
}

}  // namespace nashadmm
