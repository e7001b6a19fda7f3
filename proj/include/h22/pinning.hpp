#pragma once

#include <span>
#include <vector>

#include "h22/graph.hpp"

namespace h22 {

/// Pinning profile pi >= 0 and strength epsilon > 0; eps_i = pi_i * epsilon.
class Pinning {
 public:
  Pinning(std::vector<double> pi, double epsilon);

  /// pi = indicator of x, scaled by `weight`.
  static Pinning at_vertex(std::size_t n, Vertex x, double weight, double epsilon);
  static Pinning uniform(std::size_t n, double value, double epsilon);

  std::size_t size() const noexcept { return pi_.size(); }
  const std::vector<double>& pi() const noexcept { return pi_; }
  double epsilon() const noexcept { return epsilon_; }
  double eps(Vertex i) const { return pi_.at(i) * epsilon_; }
  double eps_sum() const noexcept;

  /// Same profile, different strength.
  Pinning with_epsilon(double epsilon) const { return Pinning(pi_, epsilon); }

 private:
  std::vector<double> pi_;
  double epsilon_;
};

/// Base graph plus the implicit vertex rho joined to every i with eps_i > 0.
/// Edge list: base edges first (same order as base().edges()), then one
/// pinning edge (i, kRho, eps_i) per pinned vertex in increasing i.
class AugmentedGraph {
 public:
  AugmentedGraph(Graph base, Pinning pinning);

  const Graph& base() const noexcept { return base_; }
  const Pinning& pinning() const noexcept { return pinning_; }
  std::size_t vertex_count() const noexcept { return base_.vertex_count(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const Edge> root_edges() const noexcept {
    return std::span<const Edge>(edges_).subspan(base_.edge_count());
  }
  double eps(Vertex i) const { return pinning_.eps(i); }

 private:
  Graph base_;
  Pinning pinning_;
  std::vector<Edge> edges_;
};

/// Throws PinningError if the profile does not fit the graph.
AugmentedGraph augment(const Graph& g, const Pinning& p);

}  // namespace h22
