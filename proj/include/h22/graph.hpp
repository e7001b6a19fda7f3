#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace h22 {

/// Vertex index. The C++ API is 0-based; text formats and the CLI use the
/// 1-based labels 1..n in the same order.
using Vertex = std::size_t;

/// Sentinel for the pinning vertex rho. It is never a valid index into a Graph.
inline constexpr Vertex kRho = std::numeric_limits<Vertex>::max();

struct Edge {
  Vertex u;  // u < v for base edges; v == kRho for pinning edges
  Vertex v;
  double beta;
};

struct Neighbor {
  Vertex vertex;
  double beta;
};

/// Position of a ladder vertex: (level, vertex of the base graph).
struct LadderCoord {
  int level;
  Vertex base;
};

struct LadderSpec;

/// Finite, connected, simple graph with strictly positive edge weights.
/// Immutable after construction.
class Graph {
 public:
  /// Validates and builds. `edges` use 0-based endpoints in any order.
  static Graph build(std::size_t n, std::span<const Edge> edges);

  std::size_t vertex_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Neighbor>& neighbors(Vertex i) const { return adjacency_.at(i); }

  /// Weight of edge i~j, or nullopt if the pair is not adjacent.
  std::optional<double> weight(Vertex i, Vertex j) const;

  bool is_ladder() const noexcept { return !ladder_.empty(); }
  /// Ladder coordinates of vertex i; throws GraphError(kNotLadder) on plain graphs.
  LadderCoord ladder_coord(Vertex i) const;

 private:
  friend Graph build_ladder(const LadderSpec& spec);

  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<LadderCoord> ladder_;
};

struct LadderSpec {
  Graph base;
  int levels_below = 0;  // L_minus
  int levels_above = 0;  // L_plus
  /// Weight per base edge, aligned with base.edges(); empty means "use base weights".
  std::vector<double> vertical_weights;
  /// Weight per base vertex for the edges (n,v)~(n+1,v). A single entry is
  /// broadcast; empty means 1.
  std::vector<double> horizontal_weights;
};

/// Strip {-L_minus..L_plus} x V0 with translation-invariant weights.
/// Vertex order is lexicographic in (level, base vertex).
Graph build_ladder(const LadderSpec& spec);

/// |n - m| for x=(n,v), y=(m,w).
std::size_t horizontal_distance(const Graph& g, Vertex x, Vertex y);

/// Reads "n m" followed by m lines "i j beta" with 1-based labels.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);

// Small named graphs used by tests and the verify command.
Graph path_graph(std::size_t n, double beta = 1.0);
Graph cycle_graph(std::size_t n, double beta = 1.0);
Graph complete_graph(std::size_t n, double beta = 1.0);

}  // namespace h22
