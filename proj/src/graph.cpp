#include "h22/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "h22/error.hpp"

namespace h22 {

namespace {

std::string label(Vertex v) { return std::to_string(v + 1); }

bool connected(std::size_t n, const std::vector<std::vector<Neighbor>>& adj) {
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    for (const auto& nb : adj[u]) {
      if (!seen[nb.vertex]) {
        seen[nb.vertex] = 1;
        ++count;
        stack.push_back(nb.vertex);
      }
    }
  }
  return count == n;
}

}  // namespace

Graph Graph::build(std::size_t n, std::span<const Edge> edges) {
  using K = GraphError::Kind;
  if (n == 0) throw GraphError(K::kEmpty, "graph has no vertices");

  Graph g;
  g.adjacency_.resize(n);
  std::set<std::pair<Vertex, Vertex>> seen;
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n)
      throw GraphError(K::kBadVertex, "edge endpoint out of range 1.." + std::to_string(n));
    if (e.u == e.v) throw GraphError(K::kSelfLoop, "self-loop at vertex " + label(e.u));
    if (!(e.beta > 0.0) || !std::isfinite(e.beta))
      throw GraphError(K::kNonpositiveWeight,
                       "edge " + label(e.u) + "~" + label(e.v) + " has nonpositive weight");
    Vertex a = std::min(e.u, e.v), b = std::max(e.u, e.v);
    if (!seen.emplace(a, b).second)
      throw GraphError(K::kDuplicateEdge, "duplicate edge " + label(a) + "~" + label(b));
    g.edges_.push_back({a, b, e.beta});
    g.adjacency_[a].push_back({b, e.beta});
    g.adjacency_[b].push_back({a, e.beta});
  }
  if (!connected(n, g.adjacency_)) throw GraphError(K::kDisconnected, "graph is not connected");
  return g;
}

std::optional<double> Graph::weight(Vertex i, Vertex j) const {
  for (const auto& nb : adjacency_.at(i))
    if (nb.vertex == j) return nb.beta;
  return std::nullopt;
}

LadderCoord Graph::ladder_coord(Vertex i) const {
  if (ladder_.empty())
    throw GraphError(GraphError::Kind::kNotLadder, "graph was not generated as a ladder");
  return ladder_.at(i);
}

Graph build_ladder(const LadderSpec& spec) {
  using K = GraphError::Kind;
  const Graph& g0 = spec.base;
  const std::size_t width = g0.vertex_count();
  if (width == 0) throw GraphError(K::kEmpty, "ladder base graph is empty");
  if (spec.levels_below < 0 || spec.levels_above < 0)
    throw GraphError(K::kBadVertex, "ladder extents must be nonnegative");
  if (!spec.vertical_weights.empty() && spec.vertical_weights.size() != g0.edge_count())
    throw GraphError(K::kBadVertex, "one vertical weight per base edge required");
  const std::size_t nh = spec.horizontal_weights.size();
  if (nh > 1 && nh != width)
    throw GraphError(K::kBadVertex, "one horizontal weight per base vertex required");

  const int levels = spec.levels_below + spec.levels_above + 1;
  auto index = [&](int level, Vertex v) {
    return static_cast<Vertex>(level + spec.levels_below) * width + v;
  };
  auto horizontal = [&](Vertex v) {
    if (nh == 0) return 1.0;
    return nh == 1 ? spec.horizontal_weights[0] : spec.horizontal_weights[v];
  };

  std::vector<Edge> edges;
  for (int level = -spec.levels_below; level <= spec.levels_above; ++level) {
    for (std::size_t k = 0; k < g0.edge_count(); ++k) {
      const Edge& e = g0.edges()[k];
      double beta = spec.vertical_weights.empty() ? e.beta : spec.vertical_weights[k];
      edges.push_back({index(level, e.u), index(level, e.v), beta});
    }
    if (level < spec.levels_above)
      for (Vertex v = 0; v < width; ++v)
        edges.push_back({index(level, v), index(level + 1, v), horizontal(v)});
  }

  Graph g = Graph::build(static_cast<std::size_t>(levels) * width, edges);
  g.ladder_.reserve(g.vertex_count());
  for (int level = -spec.levels_below; level <= spec.levels_above; ++level)
    for (Vertex v = 0; v < width; ++v) g.ladder_.push_back({level, v});
  return g;
}

std::size_t horizontal_distance(const Graph& g, Vertex x, Vertex y) {
  if (x >= g.vertex_count() || y >= g.vertex_count())
    throw GraphError(GraphError::Kind::kBadVertex, "vertex out of range");
  int a = g.ladder_coord(x).level;
  int b = g.ladder_coord(y).level;
  return static_cast<std::size_t>(std::abs(a - b));
}

Graph read_graph(std::istream& in) {
  using K = GraphError::Kind;
  std::size_t n = 0, m = 0;
  if (!(in >> n >> m)) throw GraphError(K::kEmpty, "graph file: expected header 'n m'");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    long long i = 0, j = 0;
    double beta = 0;
    if (!(in >> i >> j >> beta))
      throw GraphError(K::kBadVertex, "graph file: expected " + std::to_string(m) + " edge lines");
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > n || static_cast<std::size_t>(j) > n)
      throw GraphError(K::kBadVertex, "graph file: vertex label out of range 1.." + std::to_string(n));
    edges.push_back({static_cast<Vertex>(i - 1), static_cast<Vertex>(j - 1), beta});
  }
  return Graph::build(n, edges);
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError(GraphError::Kind::kEmpty, "cannot open graph file " + path);
  return read_graph(in);
}

Graph path_graph(std::size_t n, double beta) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, beta});
  return Graph::build(n, edges);
}

Graph cycle_graph(std::size_t n, double beta) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, beta});
  return Graph::build(n, edges);
}

Graph complete_graph(std::size_t n, double beta) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) edges.push_back({i, j, beta});
  return Graph::build(n, edges);
}

}  // namespace h22
