#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "nashadmm/games.hpp"
#include "nashadmm/graph.hpp"
#include "nashadmm/presets.hpp"
#include "nashadmm/rate_control.hpp"
#include "nashadmm/rng.hpp"
#include "oracles.hpp"

namespace support {

/// Two firms in one market: Q = [[3,1],[1,3]], r = (-9,-9), NE (2.25, 2.25).
inline nashadmm::CournotMarkets two_firm_markets(double hi = 10.0) {
  nashadmm::CournotMarkets m;
  m.participation = Eigen::MatrixXd::Ones(1, 2);
  m.price_intercepts = Eigen::VectorXd::Constant(1, 10.0);
  m.price_slopes = Eigen::VectorXd::Constant(1, 1.0);
  m.cost_quad = Eigen::VectorXd::Constant(2, 0.5);
  m.cost_lin = Eigen::VectorXd::Constant(2, 1.0);
  m.upper_bounds = Eigen::VectorXd::Constant(2, hi);
  return m;
}

inline nashadmm::CournotGame two_firm() { return nashadmm::CournotGame(two_firm_markets()); }

inline nashadmm::CommGraph k2() { return nashadmm::CommGraph::from_edge_list(2, {{1, 2}}); }

inline oracle::Matrix to_rows(const Eigen::MatrixXd& m) {
  oracle::Matrix out(static_cast<std::size_t>(m.rows()), oracle::Vector(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return out;
}

inline oracle::Vector to_vec(const Eigen::VectorXd& v) { return oracle::Vector(v.data(), v.data() + v.size()); }

/// Seeded Cournot instance drawn from random participation (N firms, m markets).
inline nashadmm::CournotGame random_cournot(std::size_t firms, std::size_t markets, std::uint64_t seed) {
  auto family = nashadmm::presets::example1_family();
  family.participation = nashadmm::presets::random_participation(markets, firms, 3, seed);
  return nashadmm::presets::generate_cournot(family, seed);
}

inline Eigen::VectorXd uniform_vector(nashadmm::Rng& rng, Eigen::Index n, double lo, double hi) {
  Eigen::VectorXd v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace support
