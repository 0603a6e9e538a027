#include "nashadmm/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>

namespace nashadmm {

CommGraph CommGraph::from_edge_list(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  if (n == 0) throw GraphError("graph must have at least one vertex");

  std::set<Edge> unique;
  for (const auto& [i, j] : edges) {
    if (i < 1 || i > n || j < 1 || j > n) {
      throw InvalidEdgeError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                             ") has an index outside [1, " + std::to_string(n) + "]");
    }
    if (i == j) throw InvalidEdgeError("self-loop at vertex " + std::to_string(i));
    unique.insert(Edge{std::min(i, j) - 1, std::max(i, j) - 1});
  }

  CommGraph g;
  g.n_ = n;
  g.edges_.assign(unique.begin(), unique.end());
  g.neighbors_.assign(n, {});
  g.adjacency_ = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& e : g.edges_) {
    g.neighbors_[e.u].push_back(e.v);
    g.neighbors_[e.v].push_back(e.u);
    g.adjacency_(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = 1;
    g.adjacency_(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = 1;
  }
  g.degrees_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& nb = g.neighbors_[i];
    std::sort(nb.begin(), nb.end());
    g.degrees_[i] = nb.size();
    if (nb.empty()) {
      throw IsolatedVertexError("vertex " + std::to_string(i + 1) + " has no incident edge", i + 1);
    }
  }

  Eigen::VectorXi deg(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) deg(static_cast<Eigen::Index>(i)) = static_cast<int>(g.degrees_[i]);
  g.laplacian_int_ = Eigen::MatrixXi(deg.asDiagonal()) - g.adjacency_;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.laplacian_int_.cast<double>(),
                                                     Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw std::runtime_error("Laplacian eigendecomposition failed");
  g.spectrum_ = eig.eigenvalues();
  return g;
}

Eigen::MatrixXd CommGraph::degree_matrix() const {
  Eigen::VectorXd d(static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i) d(static_cast<Eigen::Index>(i)) = static_cast<double>(degrees_[i]);
  return d.asDiagonal();
}

std::size_t CommGraph::max_degree() const noexcept {
  return *std::max_element(degrees_.begin(), degrees_.end());
}

bool CommGraph::is_connected() const {
  std::vector<bool> seen(n_, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const auto v = frontier.front();
    frontier.pop();
    for (auto u : neighbors_[v]) {
      if (!seen[u]) {
        seen[u] = true;
        ++reached;
        frontier.push(u);
      }
    }
  }
  return reached == n_;
}

std::vector<std::pair<std::size_t, std::size_t>> CommGraph::edge_list_one_based() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.emplace_back(e.u + 1, e.v + 1);
  return out;
}

CommGraph read_edge_list(std::istream& in, std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long i = 0;
    long long j = 0;
    if (!(fields >> i)) continue;  // blank or comment-only
    std::string rest;
    if (!(fields >> j) || (fields >> rest) || i < 1 || j < 1) {
      throw InvalidEdgeError("edge list line " + std::to_string(line_no) +
                             ": expected two positive integers \"i j\"");
    }
    edges.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    max_index = std::max({max_index, edges.back().first, edges.back().second});
  }
  return CommGraph::from_edge_list(n == 0 ? max_index : n, edges);
}

CommGraph read_edge_list_file(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list '" + path + "'");
  return read_edge_list(in, n);
}

void write_edge_list(std::ostream& out, const CommGraph& g) {
  out << "# n=" << g.size() << " edges=" << g.edges().size() << '\n';
  for (const auto& [i, j] : g.edge_list_one_based()) out << i << ' ' << j << '\n';
}

}  // namespace nashadmm
