#include "h22/forests.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

#include "h22/error.hpp"
#include "h22/linalg.hpp"

namespace h22 {

namespace {

/// Union-find over 0..n where index n stands for rho.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t size) : parent_(size) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::size_t slot(Vertex v, std::size_t n) { return v == kRho ? n : v; }

bool edge_less(const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); }

}  // namespace

SpanningTree::SpanningTree(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (edges_.size() != n_)
    throw DimensionError("spanning tree of the augmented graph needs exactly " + std::to_string(n_) +
                         " edges");
  DisjointSets sets(n_ + 1);
  for (auto& e : edges_) {
    if (e.u == kRho) std::swap(e.u, e.v);
    if (e.v != kRho && e.u > e.v) std::swap(e.u, e.v);
    if (e.u >= n_ || (e.v != kRho && e.v >= n_)) throw DimensionError("tree edge endpoint out of range");
    if (!sets.unite(slot(e.u, n_), slot(e.v, n_))) throw DimensionError("tree edges contain a cycle");
  }
  std::sort(edges_.begin(), edges_.end(), edge_less);
}

bool SpanningTree::has_root(Vertex x) const {
  return std::any_of(edges_.begin(), edges_.end(),
                     [x](const Edge& e) { return e.v == kRho && e.u == x; });
}

std::size_t SpanningTree::root_count() const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.v == kRho; }));
}

bool operator==(const SpanningTree& a, const SpanningTree& b) {
  if (a.n_ != b.n_ || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t k = 0; k < a.edges_.size(); ++k)
    if (a.edges_[k].u != b.edges_[k].u || a.edges_[k].v != b.edges_[k].v) return false;
  return true;
}

ForestRoots forest_and_roots(const SpanningTree& tree) {
  ForestRoots out;
  for (const Edge& e : tree.edges()) {
    if (e.v == kRho)
      out.roots.push_back(e.u);
    else
      out.forest.push_back(e);
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

SpanningTree tree_from_forest(const AugmentedGraph& ag, const ForestRoots& fr) {
  std::vector<Edge> edges = fr.forest;
  for (Vertex r : fr.roots) {
    if (r >= ag.vertex_count() || !(ag.eps(r) > 0.0))
      throw DimensionError("root " + std::to_string(r + 1) + " has no pinning edge");
    edges.push_back({r, kRho, ag.eps(r)});
  }
  return SpanningTree(ag.vertex_count(), std::move(edges));
}

double log_tree_weight(const SpanningTree& tree, std::span<const double> t) {
  if (t.size() != tree.vertex_count()) throw DimensionError("log_tree_weight: t has wrong size");
  double acc = 0.0;
  for (const Edge& e : tree.edges()) {
    acc += std::log(e.beta) + t[e.u];
    if (e.v != kRho) acc += t[e.v];
  }
  return acc;
}

ForestComponents::ForestComponents(const SpanningTree& tree) {
  const std::size_t n = tree.vertex_count();
  DisjointSets sets(n);
  for (const Edge& e : tree.edges())
    if (e.v != kRho) sets.unite(e.u, e.v);
  parent_.resize(n);
  for (Vertex i = 0; i < n; ++i) parent_[i] = sets.find(i);
}

bool connected_in_forest(const SpanningTree& tree, Vertex x, Vertex y) {
  if (x >= tree.vertex_count() || y >= tree.vertex_count())
    throw DimensionError("connected_in_forest: vertex out of range");
  if (x == y) return true;
  return ForestComponents(tree).connected(x, y);
}

std::vector<SpanningTree> enumerate_spanning_trees(const AugmentedGraph& ag) {
  const std::size_t n = ag.vertex_count();
  if (n + 1 > kMaxEnumerationVertices)
    throw GuardError("spanning tree enumeration limited to " +
                     std::to_string(kMaxEnumerationVertices) + " vertices including rho");
  const std::vector<Edge>& edges = ag.edges();
  const std::size_t m = edges.size();
  std::vector<SpanningTree> out;
  std::vector<Edge> chosen;

  // Include/exclude each edge in turn: including contracts its endpoints,
  // excluding deletes it. Branches that can no longer span are cut.
  auto spans_with_rest = [&](DisjointSets sets, std::size_t from) {
    for (std::size_t k = from; k < m; ++k) sets.unite(slot(edges[k].u, n), slot(edges[k].v, n));
    const std::size_t root = sets.find(0);
    for (std::size_t i = 1; i <= n; ++i)
      if (sets.find(i) != root) return false;
    return true;
  };

  auto recurse = [&](auto&& self, std::size_t k, DisjointSets sets) -> void {
    if (chosen.size() == n) {
      out.emplace_back(n, chosen);
      return;
    }
    if (k == m || m - k < n - chosen.size()) return;
    const Edge& e = edges[k];
    DisjointSets contracted = sets;
    if (contracted.unite(slot(e.u, n), slot(e.v, n))) {
      chosen.push_back(e);
      self(self, k + 1, contracted);
      chosen.pop_back();
    }
    if (spans_with_rest(sets, k + 1)) self(self, k + 1, std::move(sets));
  };
  recurse(recurse, 0, DisjointSets(n + 1));
  return out;
}

TreeLaw::TreeLaw(const AugmentedGraph& ag, std::span<const double> t) : trees_(enumerate_spanning_trees(ag)) {
  if (t.size() != ag.vertex_count()) throw DimensionError("tree_law: t has wrong size");
  log_weights_.reserve(trees_.size());
  for (const auto& tree : trees_) log_weights_.push_back(log_tree_weight(tree, t));
  const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
  double acc = 0.0;
  for (double lw : log_weights_) acc += std::exp(lw - top);
  log_normalizer_ = top + std::log(acc);
}

double TreeLaw::probability(std::size_t k) const { return std::exp(log_weights_.at(k) - log_normalizer_); }

double TreeLaw::log_probability(const SpanningTree& tree) const {
  for (std::size_t k = 0; k < trees_.size(); ++k)
    if (trees_[k] == tree) return log_weights_[k] - log_normalizer_;
  throw DimensionError("tree is not a spanning tree of this augmented graph");
}

SpanningTree sample_tree_wilson(const AugmentedGraph& ag, std::span<const double> t, Rng& rng) {
  const std::size_t n = ag.vertex_count();
  if (t.size() != n) throw DimensionError("sample_tree_wilson: t has wrong size");

  // Outgoing transitions of each base vertex, conductances shifted by the
  // per-vertex maximum log conductance before exponentiation.
  struct Step {
    Vertex to;
    double beta;
    double cumulative;
  };
  std::vector<std::vector<Step>> steps(n);
  std::vector<double> logc;
  for (Vertex u = 0; u < n; ++u) {
    logc.clear();
    auto& out = steps[u];
    for (const Neighbor& nb : ag.base().neighbors(u)) {
      conductance(1.0, t[u], t[nb.vertex]);  // overflow check only
      out.push_back({nb.vertex, nb.beta, 0.0});
      logc.push_back(std::log(nb.beta) + t[u] + t[nb.vertex]);
    }
    if (ag.eps(u) > 0.0) {
      conductance(1.0, t[u], 0.0);
      out.push_back({kRho, ag.eps(u), 0.0});
      logc.push_back(std::log(ag.eps(u)) + t[u]);
    }
    const double top = *std::max_element(logc.begin(), logc.end());
    double acc = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
      acc += std::exp(logc[k] - top);
      out[k].cumulative = acc;
    }
  }

  std::vector<char> in_tree(n, 0);
  std::vector<std::size_t> next(n, 0);  // index into steps[u]
  auto is_done = [&](Vertex v) { return v == kRho || in_tree[v]; };
  for (Vertex start = 0; start < n; ++start) {
    Vertex u = start;
    while (!is_done(u)) {
      const auto& out = steps[u];
      const double r = rng.uniform() * out.back().cumulative;
      std::size_t k = 0;
      while (k + 1 < out.size() && out[k].cumulative <= r) ++k;
      next[u] = k;
      u = out[k].to;
    }
    u = start;
    while (!is_done(u)) {
      in_tree[u] = 1;
      u = steps[u][next[u]].to;
    }
  }

  std::vector<Edge> edges;
  edges.reserve(n);
  for (Vertex u = 0; u < n; ++u) {
    const Step& s = steps[u][next[u]];
    edges.push_back({u, s.to, s.beta});
  }
  return SpanningTree(n, std::move(edges));
}

}  // namespace h22
