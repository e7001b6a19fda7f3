#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "h22/graph.hpp"
#include "h22/pinning.hpp"

// Brute-force references for the exact identities. Nothing here calls into
// the forests module; trees are found by testing every edge subset and
// determinants by cofactor expansion.
namespace h22::oracle {

/// Determinant by Laplace expansion along the first row (n <= 8 or so).
double cofactor_determinant(const std::vector<std::vector<double>>& m);

/// Spanning trees of the augmented graph as lists of indices into ag.edges().
class TreeList {
 public:
  explicit TreeList(const AugmentedGraph& ag);

  const std::vector<std::vector<std::size_t>>& trees() const noexcept { return trees_; }
  /// Base edges followed by (i, rho, eps_i) for every vertex, zero weights included.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  /// log prod_{e in T} beta_e e^{t_i + t_j}.
  double log_weight(std::size_t k, std::span<const double> t) const;
  /// log of sum over all trees.
  double log_total(std::span<const double> t) const;
  /// True iff T contains (x~rho) and x, y are joined by base edges of T.
  bool rooted_at_and_joined(std::size_t k, Vertex x, Vertex y) const;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> trees_;
};

struct Comparison {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs: logdet_pinned (factorization). rhs: log of the enumerated tree sum.
Comparison oracle_matrix_tree(const AugmentedGraph& ag, std::span<const double> t);

/// lhs: signed_minor_det(A + eps_hat, x, y). rhs: sum over trees rooted at x
/// that join x and y of prod_{j in R(T) \ {x}} eps_j e^{t_j} * prod_{F(T)} beta e^{t_i + t_j}.
Comparison oracle_minor_forest(const AugmentedGraph& ag, std::span<const double> t, Vertex x, Vertex y);

struct GreenComparison {
  Comparison rooted_x;  // eps_x e^{t_x} M^{-1}_xy  vs  P(x root, x <-> y)
  Comparison rooted_y;  // eps_y e^{t_y} M^{-1}_xy  vs  P(y root, x <-> y)
  Comparison green;     // green_entry  vs  prefactor * P(union)
};

GreenComparison oracle_green_formula(const AugmentedGraph& ag, std::span<const double> t, Vertex x, Vertex y);

inline constexpr double kRelativeTolerance = 1e-10;
inline constexpr double kAbsoluteTolerance = 1e-12;

struct CheckRecord {
  std::string identity;
  std::string instance;
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_gap = 0.0;
  bool pass = false;
};

/// Relative gap with an absolute floor near zero.
CheckRecord make_record(std::string identity, std::string instance, double lhs, double rhs);
/// For quantities given as logs: relative gap of the underlying values.
CheckRecord make_log_record(std::string identity, std::string instance, double log_lhs, double log_rhs);

struct NamedGraph {
  std::string name;
  Graph graph;
};

/// path2, path3, cycle4, K4 and the width-2 ladder with levels 0..2.
std::vector<NamedGraph> bundled_corpus();

struct SuiteOptions {
  std::size_t max_vertices = 7;
  std::size_t t_per_instance = 20;
  double t_range = 2.0;
  std::uint64_t seed = 20240101;
};

/// Uniform, single-point and mixed pinnings of a graph with n vertices.
std::vector<std::pair<std::string, Pinning>> standard_pinnings(std::size_t n);

/// Runs the three identities over every corpus graph within max_vertices.
std::vector<CheckRecord> run_suite(const std::vector<NamedGraph>& corpus, const SuiteOptions& opts);

nlohmann::json to_json(const CheckRecord& r);

}  // namespace h22::oracle
