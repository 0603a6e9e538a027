#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "nashadmm/games.hpp"
#include "nashadmm/graph.hpp"

namespace nashadmm {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Penalty and proximal weights of the inexact-ADMM iteration.
struct AdmmParams {
  double c = 1.0;             ///< dual ascent step / augmentation weight.
  double c0 = 1.0;            ///< extra proximal penalty.
  std::vector<double> beta;   ///< per-player proximal weights.

  static AdmmParams uniform(double c, double c0, double beta, std::size_t n) {
    return AdmmParams{c, c0, std::vector<double>(n, beta)};
  }

  double c_bar() const noexcept { return c + c0; }
  /// alpha_i = beta_i + 2 c_bar |N_i|.
  Eigen::VectorXd alpha(const CommGraph& g) const;
  /// H = diag(beta) + 2 c_bar D - c L.
  Eigen::MatrixXd proximal_weight_matrix(const CommGraph& g) const;
  /// Throws ParameterError unless c > 0, c0 > 0 and every beta_i > 0.
  void validate(std::size_t n) const;
};

/// c_min with c_min * lambda2 = (theta + theta0)^2 / (4 mu) + theta.
double c_min(double theta, double theta0, double mu, double lambda2);

/// 2 x 2 matrix whose smallest eigenvalue is the restricted monotonicity
/// modulus mu_bar.
Eigen::Matrix2d restricted_monotonicity_matrix(double mu, double theta, double theta0, std::size_t n,
                                               double lambda2, double c0);

/// lambda_min of restricted_monotonicity_matrix; nonpositive once c0 <= c_min.
double mu_bar(double mu, double theta, double theta0, std::size_t n, double lambda2, double c0);

/// theta_bar = theta + 2 c0 d*.
inline double theta_bar(double theta, double c0, std::size_t d_star) {
  return theta + 2.0 * c0 * static_cast<double>(d_star);
}

struct BetaCondition {
  bool satisfied = false;
  double lhs = 0.0;  ///< lambda_min(B + 2 c_bar D - c L)
  double rhs = 0.0;  ///< theta_bar^2 / (2 mu_bar), +inf when mu_bar <= 0
};

BetaCondition check_beta_condition(const AdmmParams& params, const CommGraph& g, double theta_bar,
                                   double mu_bar);

/// Smallest uniform beta with lambda_min(beta I + 2 c_bar D - c L) >= rhs + margin.
double beta_for_condition(const CommGraph& g, double c, double c0, double theta_bar, double mu_bar,
                          double margin = 1.0);

struct TheoryConstants {
  double mu = 0.0;
  double theta0 = 0.0;
  double theta = 0.0;
  double lambda2 = 0.0;
  std::size_t d_star = 0;
  double c_min = 0.0;
  double mu_bar = 0.0;
  double theta_bar = 0.0;
  double beta_condition_lhs = 0.0;
  double beta_condition_rhs = 0.0;
  bool c0_above_c_min = false;
  bool condition_satisfied = false;
};

TheoryConstants theory_constants(const GameConstants& game, const CommGraph& g, const AdmmParams& params);

/// c0 = factor * c_min, the default when no c0 is configured.
double default_c0(const GameConstants& game, const CommGraph& g, double factor = 1.001);

}  // namespace nashadmm
