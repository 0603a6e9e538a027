#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nashadmm/games.hpp"
#include "nashadmm/graph.hpp"
#include "nashadmm/rate_control.hpp"

namespace nashadmm::presets {

/// 20-vertex ring 1-2-...-20-1 with chords (2,15) and (6,13).
CommGraph fig2_ring20();

/// 7 x 20 firm-market participation pattern of the networked Cournot example.
Eigen::MatrixXd example1_participation();

/// Seeded Cournot family: q_i, b_i ~ U(q_range), U(b_range); z_k fixed;
/// P_bar_k = z_k [A hi]_k + U(intercept_noise); hi_i = total_bound / n_i.
struct CournotFamily {
  Eigen::MatrixXd participation;
  double price_slope = 0.01;
  std::pair<double, double> q_range{1.0, 2.0};
  std::pair<double, double> b_range{1.0, 2.0};
  std::pair<double, double> intercept_noise{1.0, 2.0};
  double total_bound = 1.0;
  bool normalize = true;
};

CournotFamily example1_family();
CournotGame generate_cournot(const CournotFamily& family, std::uint64_t seed);

/// 16-link, 15-user route incidence of the rate-control example (R_1 = {L2, L3}).
Eigen::MatrixXi example2_incidence();
/// 15-player ring with chords (1,9) and (1,10); lambda2 ~ 0.1805.
CommGraph example2_comm_graph();
/// Example network with C_j = 10, chi_i = 10 and the given kappa.
RateControlNetwork example2_network(double kappa = 10.0);

/// Random participation: every firm joins 1..max_markets distinct markets and
/// every market gets at least one firm.
Eigen::MatrixXd random_participation(std::size_t markets, std::size_t firms, std::size_t max_markets,
                                     std::uint64_t seed);

/// Connected random graph: a random spanning tree plus `extra_edges` random chords.
CommGraph random_connected_graph(std::size_t n, std::size_t extra_edges, std::uint64_t seed);

/// Looks up a named graph preset ("fig2-ring20", "example2-comm").
CommGraph graph_by_name(const std::string& name);

}  // namespace nashadmm::presets
