#pragma once

#include <span>
#include <vector>

#include "h22/forests.hpp"
#include "h22/pinning.hpp"
#include "h22/sampler.hpp"

namespace h22 {

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  double n_effective = 0.0;
};

/// Mean with a standard error corrected by the series' integrated
/// autocorrelation time. Constant series give std_error 0.
Estimate estimate_series(std::span<const double> values);

/// e^{t_x+t_y} / (pi_x e^{t_x} + pi_y e^{t_y}) if x is a root and x <-> y in
/// F(T), else 0.
double obs_q(std::span<const double> t, const SpanningTree& tree, Vertex x, Vertex y,
             std::span<const double> pi);

/// Same value with the forest components precomputed.
double obs_q(std::span<const double> t, const SpanningTree& tree, const ForestComponents& comp, Vertex x,
             Vertex y, std::span<const double> pi);

/// G_xy from the exact tree law: the prefactor e^{t_x+t_y}/(eps_x e^{t_x} +
/// eps_y e^{t_y}) times P(x or y is a root connected to the other in F(T)).
double green_conditional(const AugmentedGraph& ag, std::span<const double> t, Vertex x, Vertex y);

/// E[e^{t_y}] with IACT-corrected error. The exact value is 1.
Estimate estimate_ward(const SampleBatch& batch, Vertex y);

struct EpsGreenEstimate {
  Estimate matrix_path;     // mean of epsilon * G_xy(t) per draw
  Estimate indicator_path;  // mean of Q_xy + Q_yx per draw
  Estimate difference;      // paired per-draw difference (matrix - indicator)
  bool consistent = false;  // |difference| <= 3 * its standard error
};

/// epsilon * E[G_xy] by the matrix path and the tree-indicator path.
EpsGreenEstimate estimate_eps_green(const SampleBatch& batch, const AugmentedGraph& ag, Vertex x, Vertex y);

/// Per-draw epsilon * G_xy(t) from the matrix path, for every y in `targets`.
std::vector<std::vector<double>> eps_green_series(const SampleBatch& batch, const AugmentedGraph& ag,
                                                  Vertex x, std::span<const Vertex> targets);

struct RootDecomposition {
  Estimate one_root;    // E[Q_xy 1{R(T) = {x}}]
  Estimate multi_root;  // E[Q_xy 1{|R(T)| > 1}]
  Estimate total;       // E[Q_xy]
};

RootDecomposition root_decomposition(const SampleBatch& batch, Vertex x, Vertex y, std::span<const double> pi);

/// Per-draw (one_root, multi_root) parts of Q_xy; they add up to obs_q exactly.
std::pair<double, double> split_by_roots(std::span<const double> t, const SpanningTree& tree, Vertex x, Vertex y,
                                         std::span<const double> pi);

}  // namespace h22
