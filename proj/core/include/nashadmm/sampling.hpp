#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

#include "nashadmm/games.hpp"
#include "nashadmm/rng.hpp"

namespace nashadmm {

/// Returns the s-th sample point in R^N.
using DomainSampler = std::function<Eigen::VectorXd(std::size_t sample_index)>;

/// Sampled monotonicity and Lipschitz estimates. These are estimates over the
/// visited points, not certificates.
struct SampledConstants {
  GameConstants constants;
  std::size_t used = 0;
  std::size_t skipped = 0;  ///< samples rejected with a DomainError.
};

/// Central-difference Jacobian of F at x; step 1e-6 * max(1, |x_j|).
Eigen::MatrixXd pseudo_gradient_jacobian(const GameModel& game, const Eigen::VectorXd& x);

/// theta0 = max ||DF(x)||_2, mu = min lambda_min(sym DF(x)) over the samples,
/// theta = ||D(extended F)||_2 maximized over stacked points whose blocks are
/// sample points. Since row i of the extended Jacobian only touches block i,
/// that norm is max over samples and players of ||row_i DF(x)||_2.
SampledConstants estimate_constants_sampled(const GameModel& game, const DomainSampler& sampler,
                                            std::size_t n_samples);

/// Uniform draws from the product of action intervals.
DomainSampler uniform_box_sampler(const GameModel& game, Rng rng);

/// Uniform draws from box^N.
DomainSampler uniform_box_sampler(std::size_t n, Interval box, Rng rng);

/// Tensor grid over the action box with `points_per_axis` points per player,
/// enumerated in mixed-radix order with player 1 varying fastest (cycles when
/// exhausted).
DomainSampler grid_sampler(const GameModel& game, std::size_t points_per_axis);

}  // namespace nashadmm
