#include "nashadmm/theory.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace nashadmm {

Eigen::VectorXd AdmmParams::alpha(const CommGraph& g) const {
  const auto n = g.size();
  if (beta.size() != n) throw ParameterError("beta must have one entry per player");
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    out(static_cast<Eigen::Index>(i)) = beta[i] + 2.0 * c_bar() * static_cast<double>(g.degree(i));
  }
  return out;
}

Eigen::MatrixXd AdmmParams::proximal_weight_matrix(const CommGraph& g) const {
  if (beta.size() != g.size()) throw ParameterError("beta must have one entry per player");
  const Eigen::Map<const Eigen::VectorXd> b(beta.data(), static_cast<Eigen::Index>(beta.size()));
  return Eigen::MatrixXd(b.asDiagonal()) + 2.0 * c_bar() * g.degree_matrix() - c * g.laplacian();
}

void AdmmParams::validate(std::size_t n) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("c must be finite and > 0");
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw ParameterError("c0 must be finite and > 0");
  if (beta.size() != n) {
    throw ParameterError("beta has " + std::to_string(beta.size()) + " entries, expected " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(beta[i] > 0.0) || !std::isfinite(beta[i])) {
      throw ParameterError("beta_" + std::to_string(i + 1) + " must be finite and > 0");
    }
  }
}

double c_min(double theta, double theta0, double mu, double lambda2) {
  if (!(theta > 0.0) || !(theta0 > 0.0) || !(mu > 0.0) || !(lambda2 > 0.0)) {
    throw ParameterError("c_min requires theta, theta0, mu and lambda2 > 0");
  }
  const double s = theta + theta0;
  return (s * s / (4.0 * mu) + theta) / lambda2;
}

Eigen::Matrix2d restricted_monotonicity_matrix(double mu, double theta, double theta0, std::size_t n,
                                               double lambda2, double c0) {
  if (n < 2) throw ParameterError("restricted monotonicity needs at least two players");
  const double nn = static_cast<double>(n);
  const double off = -(theta + theta0) / (2.0 * std::sqrt(nn));
  Eigen::Matrix2d psi;
  psi << mu / nn, off, off, c0 * lambda2 - theta;
  return psi;
}

double mu_bar(double mu, double theta, double theta0, std::size_t n, double lambda2, double c0) {
  const auto psi = restricted_monotonicity_matrix(mu, theta, theta0, n, lambda2, c0);
  // Closed-form smaller eigenvalue of a symmetric 2x2.
  const double mean = 0.5 * (psi(0, 0) + psi(1, 1));
  const double half_gap = 0.5 * (psi(0, 0) - psi(1, 1));
  return mean - std::hypot(half_gap, psi(0, 1));
}

BetaCondition check_beta_condition(const AdmmParams& params, const CommGraph& g, double theta_bar,
                                   double mu_bar) {
  BetaCondition out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(params.proximal_weight_matrix(g), Eigen::EigenvaluesOnly);
  out.lhs = eig.eigenvalues()(0);
  if (!(mu_bar > 0.0)) {
    out.rhs = std::numeric_limits<double>::infinity();
    out.satisfied = false;
    return out;
  }
  out.rhs = theta_bar * theta_bar / (2.0 * mu_bar);
  out.satisfied = out.lhs > out.rhs;
  return out;
}

double beta_for_condition(const CommGraph& g, double c, double c0, double theta_bar, double mu_bar,
                          double margin) {
  if (!(mu_bar > 0.0)) throw ParameterError("no beta satisfies the step condition when mu_bar <= 0");
  const Eigen::MatrixXd m = 2.0 * (c + c0) * g.degree_matrix() - c * g.laplacian();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  const double rhs = theta_bar * theta_bar / (2.0 * mu_bar);
  // lambda_min(beta I + M) = beta + lambda_min(M).
  return std::max(rhs + margin - eig.eigenvalues()(0), margin);
}

TheoryConstants theory_constants(const GameConstants& game, const CommGraph& g, const AdmmParams& params) {
  TheoryConstants t;
  t.mu = game.mu;
  t.theta0 = game.theta0;
  t.theta = game.theta;
  t.lambda2 = g.algebraic_connectivity();
  t.d_star = g.max_degree();
  t.c_min = c_min(game.theta, game.theta0, game.mu, t.lambda2);
  t.mu_bar = mu_bar(game.mu, game.theta, game.theta0, g.size(), t.lambda2, params.c0);
  t.theta_bar = theta_bar(game.theta, params.c0, t.d_star);
  const auto cond = check_beta_condition(params, g, t.theta_bar, t.mu_bar);
  t.beta_condition_lhs = cond.lhs;
  t.beta_condition_rhs = cond.rhs;
  t.c0_above_c_min = params.c0 > t.c_min;
  t.condition_satisfied = cond.satisfied && t.c0_above_c_min;
  return t;
}

double default_c0(const GameConstants& game, const CommGraph& g, double factor) {
  return factor * c_min(game.theta, game.theta0, game.mu, g.algebraic_connectivity());
}

}  // namespace nashadmm
