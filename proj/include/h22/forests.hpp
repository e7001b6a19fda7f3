#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "h22/graph.hpp"
#include "h22/pinning.hpp"
#include "h22/rng.hpp"

namespace h22 {

/// Spanning tree of the augmented graph, identified with its edge set.
/// Edges are kept sorted by (u, v) so pinning edges (v == kRho) come last
/// within each u and equal trees compare equal.
class SpanningTree {
 public:
  /// Validates that `edges` span {0..n-1} and rho without cycles.
  SpanningTree(std::size_t n, std::vector<Edge> edges);

  std::size_t vertex_count() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool has_root(Vertex x) const;
  std::size_t root_count() const;

  friend bool operator==(const SpanningTree& a, const SpanningTree& b);

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
};

struct ForestRoots {
  std::vector<Edge> forest;   // F(T) = T intersected with the base edges
  std::vector<Vertex> roots;  // R(T), increasing
};

ForestRoots forest_and_roots(const SpanningTree& tree);

/// Inverse of forest_and_roots. Root edges take their weights from `ag`.
SpanningTree tree_from_forest(const AugmentedGraph& ag, const ForestRoots& fr);

/// Sum over tree edges of log beta_ij + t_i + t_j, with t_rho = 0.
double log_tree_weight(const SpanningTree& tree, std::span<const double> t);

/// Components of F(T); rho is not part of any component.
class ForestComponents {
 public:
  explicit ForestComponents(const SpanningTree& tree);
  bool connected(Vertex x, Vertex y) const { return parent_.at(x) == parent_.at(y); }
  Vertex component(Vertex x) const { return parent_.at(x); }

 private:
  std::vector<Vertex> parent_;  // fully compressed: parent_[x] is the representative
};

bool connected_in_forest(const SpanningTree& tree, Vertex x, Vertex y);

/// Largest |V_rho| accepted by exact enumeration.
inline constexpr std::size_t kMaxEnumerationVertices = 12;

/// Every spanning tree of the augmented graph exactly once.
std::vector<SpanningTree> enumerate_spanning_trees(const AugmentedGraph& ag);

/// Law of T given t: P(T = S) proportional to prod_{e in S} beta_e e^{t_i + t_j}.
class TreeLaw {
 public:
  TreeLaw(const AugmentedGraph& ag, std::span<const double> t);

  const std::vector<SpanningTree>& trees() const noexcept { return trees_; }
  const std::vector<double>& log_weights() const noexcept { return log_weights_; }
  double log_normalizer() const noexcept { return log_normalizer_; }
  double probability(std::size_t k) const;
  double log_probability(const SpanningTree& tree) const;

  template <typename Pred>
  double probability_of(Pred&& pred) const {
    double p = 0.0;
    for (std::size_t k = 0; k < trees_.size(); ++k)
      if (pred(trees_[k])) p += probability(k);
    return p;
  }

 private:
  std::vector<SpanningTree> trees_;
  std::vector<double> log_weights_;
  double log_normalizer_ = 0.0;
};

inline TreeLaw tree_law(const AugmentedGraph& ag, std::span<const double> t) { return TreeLaw(ag, t); }

/// One exact draw from the tree law by Wilson's algorithm rooted at rho.
SpanningTree sample_tree_wilson(const AugmentedGraph& ag, std::span<const double> t, Rng& rng);

}  // namespace h22
