#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "nashadmm/graph.hpp"
#include "nashadmm/presets.hpp"
#include "nashadmm/rng.hpp"
#include "oracles.hpp"

using namespace nashadmm;

TEST_CASE("two-node graph") {
  const auto g = CommGraph::from_edge_list(2, {{1, 2}});
  Eigen::MatrixXd expected(2, 2);
  expected << 1, -1, -1, 1;
  CHECK(g.laplacian() == expected);
  CHECK(g.algebraic_connectivity() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(g.max_degree() == 1);
}

TEST_CASE("path graph on three vertices") {
  const auto g = CommGraph::from_edge_list(3, {{1, 2}, {2, 3}});
  CHECK(g.degrees() == std::vector<std::size_t>{1, 2, 1});
  Eigen::MatrixXd expected(3, 3);
  expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  CHECK(g.laplacian() == expected);
  CHECK(g.algebraic_connectivity() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.max_laplacian_eigenvalue() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(g.max_degree() == 2);
  CHECK(g.is_connected());
}

TEST_CASE("ring with two chords") {
  const auto g = presets::fig2_ring20();
  CHECK(g.size() == 20);
  for (std::size_t v = 0; v < 20; ++v) {
    const bool chord = v == 1 || v == 5 || v == 12 || v == 14;
    CHECK(g.degree(v) == (chord ? 3u : 2u));
  }
  CHECK(g.max_degree() == 3);
  CHECK(g.is_connected());

  const auto ev = oracle::jacobi_eigenvalues(oracle::laplacian(20, g.edge_list_one_based()));
  CHECK(g.algebraic_connectivity() == doctest::Approx(ev[1]).epsilon(1e-9));
  CHECK(std::abs(g.algebraic_connectivity() - 0.102) <= 0.001);
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(CommGraph::from_edge_list(3, {{1, 1}, {2, 3}}), InvalidEdgeError);
  CHECK_THROWS_AS(CommGraph::from_edge_list(3, {{1, 4}, {2, 3}}), InvalidEdgeError);
  CHECK_THROWS_AS(CommGraph::from_edge_list(3, {{0, 1}, {2, 3}}), InvalidEdgeError);
  try {
    (void)CommGraph::from_edge_list(3, {{1, 2}});
    FAIL("expected IsolatedVertexError");
  } catch (const IsolatedVertexError& e) {
    CHECK(e.vertex() == 3);
  }
}

TEST_CASE("duplicate edges collapse") {
  const auto g = CommGraph::from_edge_list(3, {{1, 2}, {2, 1}, {2, 3}, {1, 2}});
  CHECK(g.edges().size() == 2);
  CHECK(g.degree(1) == 2);
}

TEST_CASE("disconnected graph is constructible") {
  const auto g = CommGraph::from_edge_list(4, {{1, 2}, {3, 4}});
  CHECK_FALSE(g.is_connected());
  CHECK(std::abs(g.algebraic_connectivity()) < 1e-12);
}

TEST_CASE("random graph properties") {
  auto rng = Rng::stream(11, StreamPurpose::kGraphGeneration, 100);
  int built = 0;
  int disconnected = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 2 + rng.below(11);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    const double p = rng.uniform(0.1, 0.6);
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = i + 1; j <= n; ++j)
        if (rng.uniform01() < p) edges.emplace_back(i, j);
    std::vector<int> deg(n + 1, 0);
    for (auto [u, v] : edges) ++deg[u], ++deg[v];
    if (std::count(deg.begin() + 1, deg.end(), 0) > 0) continue;
    const auto g = CommGraph::from_edge_list(n, edges);
    ++built;
    disconnected += g.is_connected() ? 0 : 1;

    const Eigen::MatrixXi l = g.laplacian_int();
    CHECK((l * Eigen::VectorXi::Ones(static_cast<Eigen::Index>(n))).isZero());
    CHECK((Eigen::RowVectorXi::Ones(static_cast<Eigen::Index>(n)) * l).isZero());
    CHECK((g.algebraic_connectivity() > 1e-12) == g.is_connected());
    CHECK(g.max_laplacian_eigenvalue() <= 2.0 * static_cast<double>(g.max_degree()) + 1e-12);

    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (auto& v : x) v = rng.uniform(-1, 1);
    x.array() -= x.mean();
    const double quad = x.dot(g.laplacian() * x);
    CHECK(quad >= g.algebraic_connectivity() * x.squaredNorm() - 1e-9 * x.squaredNorm());
  }
  CHECK(built > 100);
  CHECK(disconnected > 0);
}

TEST_CASE("edge list text format") {
  std::istringstream in("# ring\n1 2\n2 3  # tail comment\n\n3 1\n");
  const auto g = read_edge_list(in);
  CHECK(g.size() == 3);
  CHECK(g.edges().size() == 3);

  std::ostringstream out;
  write_edge_list(out, presets::fig2_ring20());
  std::istringstream back(out.str());
  const auto h = read_edge_list(back);
  CHECK(h.edge_list_one_based() == presets::fig2_ring20().edge_list_one_based());

  std::istringstream bad("1 2\n2 x\n");
  try {
    (void)read_edge_list(bad);
    FAIL("expected a parse error");
  } catch (const InvalidEdgeError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("shipped edge lists match presets") {
  const auto g = presets::example2_comm_graph();
  CHECK(g.size() == 15);
  CHECK(g.algebraic_connectivity() == doctest::Approx(0.1804676).epsilon(1e-6));
}
