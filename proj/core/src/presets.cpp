#include "nashadmm/presets.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "nashadmm/rng.hpp"

namespace nashadmm::presets {

namespace {

using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

EdgeList ring(std::size_t n) {
  EdgeList edges;
  for (std::size_t i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
  edges.emplace_back(1, n);
  return edges;
}

}  // namespace

CommGraph fig2_ring20() {
  auto edges = ring(20);
  edges.emplace_back(2, 15);
  edges.emplace_back(6, 13);
  return CommGraph::from_edge_list(20, edges);
}

Eigen::MatrixXd example1_participation() {
  // firm -> markets, 1-based
  static const std::vector<std::vector<int>> firm_markets = {
      {1},       {1, 2}, {2},    {3},       {1},    {1, 2, 3, 4}, {4},    {3, 4}, {3}, {1, 4, 6},
      {4, 5},    {5},    {5},    {6},       {5, 6, 7}, {5, 7},   {6, 7}, {7},    {7}, {7},
  };
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(7, 20);
  for (std::size_t i = 0; i < firm_markets.size(); ++i) {
    for (int k : firm_markets[i]) a(k - 1, static_cast<Eigen::Index>(i)) = 1.0;
  }
  return a;
}

CournotFamily example1_family() {
  CournotFamily f;
  f.participation = example1_participation();
  return f;
}

CournotGame generate_cournot(const CournotFamily& family, std::uint64_t seed) {
  const auto& a = family.participation;
  const auto m = a.rows();
  const auto n = a.cols();
  auto rng = Rng::stream(seed, StreamPurpose::kGameGeneration);

  CournotMarkets markets;
  markets.participation = a;
  markets.normalize = family.normalize;
  markets.cost_quad.resize(n);
  markets.cost_lin.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    markets.cost_quad(i) = rng.uniform(family.q_range.first, family.q_range.second);
    markets.cost_lin(i) = rng.uniform(family.b_range.first, family.b_range.second);
  }
  const Eigen::VectorXd per_firm = a.colwise().sum().transpose();
  if ((per_firm.array() < 1.0).any()) throw InvalidGameError("every firm must join at least one market");
  markets.upper_bounds = family.total_bound * per_firm.cwiseInverse();
  markets.price_slopes = Eigen::VectorXd::Constant(m, family.price_slope);
  const Eigen::VectorXd supply_cap = a * markets.upper_bounds;
  markets.price_intercepts.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    markets.price_intercepts(k) = family.price_slope * supply_cap(k) +
                                  rng.uniform(family.intercept_noise.first, family.intercept_noise.second);
  }
  return CournotGame(std::move(markets));
}

Eigen::MatrixXi example2_incidence() {
  // user -> links on its route, 1-based; 15 users on 16 links, two users per link.
  static const std::vector<std::vector<int>> routes = {
      {2, 3},   {1, 2},   {3, 4},   {4, 5, 6}, {6, 7},      {7, 8},  {8, 9, 10}, {10, 11},
      {11, 12}, {12, 13}, {13, 14, 15}, {15, 16}, {16, 1}, {5, 9}, {14},
  };
  Eigen::MatrixXi inc = Eigen::MatrixXi::Zero(16, 15);
  for (std::size_t i = 0; i < routes.size(); ++i) {
    for (int j : routes[i]) inc(j - 1, static_cast<Eigen::Index>(i)) = 1;
  }
  return inc;
}

CommGraph example2_comm_graph() {
  auto edges = ring(15);
  edges.emplace_back(1, 9);
  edges.emplace_back(1, 10);
  return CommGraph::from_edge_list(15, edges);
}

RateControlNetwork example2_network(double kappa) {
  RateControlNetwork net;
  net.incidence = example2_incidence();
  net.capacities = Eigen::VectorXd::Constant(16, 10.0);
  net.kappa = kappa;
  net.chi = Eigen::VectorXd::Constant(15, 10.0);
  net.max_rate = 10.0;
  return net;
}

Eigen::MatrixXd random_participation(std::size_t markets, std::size_t firms, std::size_t max_markets,
                                     std::uint64_t seed) {
  if (markets == 0 || firms == 0 || max_markets == 0) throw std::invalid_argument("empty participation request");
  auto rng = Rng::stream(seed, StreamPurpose::kGameGeneration, 1);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(markets), static_cast<Eigen::Index>(firms));
  const auto cap = std::min(max_markets, markets);
  for (std::size_t i = 0; i < firms; ++i) {
    const auto count = 1 + rng.below(cap);
    std::vector<std::size_t> pool(markets);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t t = 0; t < count; ++t) {
      const auto pick = t + rng.below(markets - t);
      std::swap(pool[t], pool[pick]);
      a(static_cast<Eigen::Index>(pool[t]), static_cast<Eigen::Index>(i)) = 1.0;
    }
  }
  for (std::size_t k = 0; k < markets; ++k) {
    if (a.row(static_cast<Eigen::Index>(k)).sum() == 0.0) {
      a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(rng.below(firms))) = 1.0;
    }
  }
  return a;
}

CommGraph random_connected_graph(std::size_t n, std::size_t extra_edges, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_connected_graph needs n >= 2");
  auto rng = Rng::stream(seed, StreamPurpose::kGraphGeneration);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 1);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 1; i < n; ++i) {
    const auto parent = order[rng.below(i)];
    edges.emplace(std::min(parent, order[i]), std::max(parent, order[i]));
  }
  const auto max_edges = n * (n - 1) / 2;
  const auto target = std::min(max_edges, edges.size() + extra_edges);
  while (edges.size() < target) {
    const auto u = 1 + rng.below(n);
    const auto v = 1 + rng.below(n);
    if (u != v) edges.emplace(std::min(u, v), std::max(u, v));
  }
  return CommGraph::from_edge_list(n, EdgeList(edges.begin(), edges.end()));
}

CommGraph graph_by_name(const std::string& name) {
  if (name == "fig2-ring20") return fig2_ring20();
  if (name == "example2-comm") return example2_comm_graph();
  throw std::invalid_argument("unknown graph preset '" + name + "'");
}

}  // namespace nashadmm::presets
