#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace nashadmm {

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Self-loop or vertex index outside [1, n].
class InvalidEdgeError : public GraphError {
 public:
  using GraphError::GraphError;
};

class IsolatedVertexError : public GraphError {
 public:
  IsolatedVertexError(const std::string& what, std::size_t vertex)
      : GraphError(what), vertex_(vertex) {}
  /// 1-based index of the first isolated vertex.
  std::size_t vertex() const noexcept { return vertex_; }

 private:
  std::size_t vertex_;
};

/// Undirected edge between 0-based vertices, normalized so that u < v.
struct Edge {
  std::size_t u;
  std::size_t v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected, unweighted communication topology.
///
/// Vertices are 0-based inside the library; from_edge_list and the edge-list
/// text format take 1-based indices. A graph is immutable once built and its
/// Laplacian spectrum is computed eagerly, so it can be shared freely between
/// threads.
class CommGraph {
 public:
  /// Builds a graph from 1-based (i, j) pairs. Duplicates and reversed
  /// duplicates collapse to one edge. Disconnected graphs are accepted;
  /// isolated vertices are not.
  static CommGraph from_edge_list(std::size_t n,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& edges);

  std::size_t size() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_.at(i); }
  std::size_t degree(std::size_t i) const { return neighbors_.at(i).size(); }
  const std::vector<std::size_t>& degrees() const noexcept { return degrees_; }

  const Eigen::MatrixXi& adjacency() const noexcept { return adjacency_; }
  const Eigen::MatrixXi& laplacian_int() const noexcept { return laplacian_int_; }
  Eigen::MatrixXd laplacian() const { return laplacian_int_.cast<double>(); }
  Eigen::MatrixXd degree_matrix() const;

  /// d* = max_i |N_i|.
  std::size_t max_degree() const noexcept;
  /// Second-smallest Laplacian eigenvalue.
  double algebraic_connectivity() const noexcept { return spectrum_(1); }
  double max_laplacian_eigenvalue() const noexcept { return spectrum_(spectrum_.size() - 1); }
  /// Ascending Laplacian eigenvalues.
  const Eigen::VectorXd& laplacian_spectrum() const noexcept { return spectrum_; }
  /// Breadth-first reachability from vertex 0.
  bool is_connected() const;

  /// Edge list as 1-based pairs, in ascending order.
  std::vector<std::pair<std::size_t, std::size_t>> edge_list_one_based() const;

 private:
  CommGraph() = default;

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::vector<std::size_t> degrees_;
  Eigen::MatrixXi adjacency_;
  Eigen::MatrixXi laplacian_int_;
  Eigen::VectorXd spectrum_;
};

/// Free-function spellings of the spectral queries.
inline double algebraic_connectivity(const CommGraph& g) { return g.algebraic_connectivity(); }
inline std::size_t max_degree(const CommGraph& g) { return g.max_degree(); }
inline bool is_connected(const CommGraph& g) { return g.is_connected(); }

/// Parses the edge-list text format: one "i j" pair per line, 1-based,
/// '#' starts a comment. The vertex count is the largest index seen unless
/// an explicit `n` is given.
CommGraph read_edge_list(std::istream& in, std::size_t n = 0);
CommGraph read_edge_list_file(const std::string& path, std::size_t n = 0);
void write_edge_list(std::ostream& out, const CommGraph& g);

}  // namespace nashadmm
