#include <sstream>

#include "doctest.h"
#include "h22/error.hpp"
#include "h22/graph.hpp"
#include "h22/pinning.hpp"

using namespace h22;

namespace {

GraphError::Kind build_error(std::size_t n, std::vector<Edge> edges) {
  try {
    Graph::build(n, edges);
  } catch (const GraphError& e) {
    return e.kind();
  }
  FAIL("expected a GraphError");
  return GraphError::Kind::kEmpty;
}

}  // namespace

TEST_CASE("build accepts small connected graphs") {
  const Graph one = Graph::build(1, {});
  CHECK(one.vertex_count() == 1);
  CHECK(one.edge_count() == 0);

  const std::vector<Edge> k2{{0, 1, 1.0}};
  const Graph g = Graph::build(2, k2);
  CHECK(g.edge_count() == 1);
  CHECK(g.weight(1, 0) == doctest::Approx(1.0));

  const std::vector<Edge> path{{0, 1, 1.0}, {1, 2, 1.0}};
  CHECK(Graph::build(3, path).edge_count() == 2);
}

TEST_CASE("build stores edges with u < v") {
  const std::vector<Edge> edges{{2, 0, 1.5}, {1, 2, 1.0}};
  const Graph g = Graph::build(3, edges);
  for (const Edge& e : g.edges()) CHECK(e.u < e.v);
  CHECK(!g.weight(0, 1).has_value());
}

TEST_CASE("build rejects invalid graphs with distinct errors") {
  using K = GraphError::Kind;
  CHECK(build_error(0, {}) == K::kEmpty);
  CHECK(build_error(4, {{0, 1, 1.0}, {1, 2, 1.0}}) == K::kDisconnected);
  CHECK(build_error(2, {{0, 1, 1.0}, {1, 0, 2.0}}) == K::kDuplicateEdge);
  CHECK(build_error(2, {{0, 1, 0.0}}) == K::kNonpositiveWeight);
  CHECK(build_error(2, {{0, 1, -1.0}}) == K::kNonpositiveWeight);
  CHECK(build_error(2, {{0, 0, 1.0}, {0, 1, 1.0}}) == K::kSelfLoop);
  CHECK(build_error(2, {{0, 2, 1.0}}) == K::kBadVertex);
}

TEST_CASE("read_graph uses 1-based labels") {
  std::istringstream in("3 2\n1 2 1.0\n2 3 0.5\n");
  const Graph g = read_graph(in);
  CHECK(g.vertex_count() == 3);
  CHECK(g.weight(1, 2) == doctest::Approx(0.5));

  std::istringstream bad("2 1\n0 1 1.0\n");
  CHECK_THROWS_AS(read_graph(bad), GraphError);
  std::istringstream zero("2 1\n1 2 0\n");
  CHECK_THROWS_AS(read_graph(zero), GraphError);
  std::istringstream truncated("3 2\n1 2 1.0\n");
  CHECK_THROWS_AS(read_graph(truncated), GraphError);
}

TEST_CASE("augment adds one rho edge per pinned vertex") {
  const Graph k2 = complete_graph(2);
  const AugmentedGraph both(k2, Pinning({1.0, 1.0}, 0.5));
  REQUIRE(both.root_edges().size() == 2);
  CHECK(both.root_edges()[0].beta == doctest::Approx(0.5));
  CHECK(both.root_edges()[1].v == kRho);

  const AugmentedGraph one(k2, Pinning({1.0, 0.0}, 1.0));
  REQUIRE(one.root_edges().size() == 1);
  CHECK(one.root_edges()[0].u == 0);

  CHECK_THROWS_AS(Pinning({0.0, 0.0}, 1.0), PinningError);
  CHECK_THROWS_AS(Pinning({1.0, 1.0}, 0.0), PinningError);
  CHECK_THROWS_AS(Pinning({1.0, -1.0}, 1.0), PinningError);
  CHECK_THROWS_AS(AugmentedGraph(k2, Pinning({1.0}, 1.0)), PinningError);
}

TEST_CASE("augment leaves the base graph untouched") {
  const Graph g = cycle_graph(4);
  const AugmentedGraph ag(g, Pinning::uniform(4, 1.0, 0.3));
  REQUIRE(ag.base().edge_count() == g.edge_count());
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    CHECK(ag.edges()[k].u == g.edges()[k].u);
    CHECK(ag.edges()[k].v == g.edges()[k].v);
    CHECK(ag.edges()[k].beta == g.edges()[k].beta);
  }
  CHECK(ag.edges().size() == g.edge_count() + 4);
  CHECK(ag.eps(2) == doctest::Approx(0.3));
}

TEST_CASE("ladder construction") {
  LadderSpec width1{Graph::build(1, {}), 0, 2, {}, {1.0}};
  const Graph path = build_ladder(width1);
  CHECK(path.vertex_count() == 3);
  CHECK(path.edge_count() == 2);

  LadderSpec k2{complete_graph(2), 1, 1, {}, {}};
  const Graph ladder = build_ladder(k2);
  CHECK(ladder.vertex_count() == 6);
  CHECK(ladder.edge_count() == 7);

  LadderSpec flat{complete_graph(2), 0, 0, {}, {}};
  const Graph single = build_ladder(flat);
  CHECK(single.vertex_count() == 2);
  CHECK(single.edge_count() == 1);

  LadderSpec weighted{complete_graph(2), 0, 3, {2.5}, {0.7}};
  const Graph w = build_ladder(weighted);
  CHECK(w.weight(0, 1) == doctest::Approx(2.5));
  CHECK(w.weight(0, 2) == doctest::Approx(0.7));
  CHECK(w.weight(6, 7) == doctest::Approx(2.5));
}

TEST_CASE("ladder edge count formula") {
  const Graph base = cycle_graph(3);
  for (int below = 0; below <= 2; ++below)
    for (int above = 0; above <= 2; ++above) {
      const Graph g = build_ladder({base, below, above, {}, {}});
      const std::size_t levels = static_cast<std::size_t>(below + above + 1);
      CHECK(g.edge_count() == levels * base.edge_count() + (levels - 1) * base.vertex_count());
    }
}

TEST_CASE("ladder rejects bad specs") {
  CHECK_THROWS_AS(build_ladder({complete_graph(2), -1, 0, {}, {}}), GraphError);
  CHECK_THROWS_AS(build_ladder({complete_graph(2), 0, 1, {1.0, 2.0}, {}}), GraphError);
  CHECK_THROWS_AS(build_ladder({complete_graph(2), 0, 1, {}, {1.0, 2.0, 3.0}}), GraphError);
}

TEST_CASE("horizontal distance") {
  const Graph g = build_ladder({complete_graph(2), 1, 2, {}, {}});
  // Vertex order is (level, base) lexicographic starting at level -1.
  auto at = [](int level, Vertex v) { return static_cast<Vertex>(level + 1) * 2 + v; };
  CHECK(g.ladder_coord(at(2, 1)).level == 2);
  CHECK(horizontal_distance(g, at(0, 0), at(0, 1)) == 0);
  CHECK(horizontal_distance(g, at(-1, 0), at(2, 0)) == 3);
  CHECK(horizontal_distance(g, at(2, 0), at(-1, 1)) == 3);
  for (Vertex a = 0; a < g.vertex_count(); ++a)
    for (Vertex b = 0; b < g.vertex_count(); ++b) {
      CHECK(horizontal_distance(g, a, b) == horizontal_distance(g, b, a));
      for (Vertex c = 0; c < g.vertex_count(); ++c)
        CHECK(horizontal_distance(g, a, c) <= horizontal_distance(g, a, b) + horizontal_distance(g, b, c));
    }
  CHECK_THROWS_AS(horizontal_distance(cycle_graph(4), 0, 1), GraphError);
}
