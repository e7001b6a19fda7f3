#pragma once

#include <Eigen/Core>
#include <span>

#include "h22/forests.hpp"
#include "h22/pinning.hpp"
#include "h22/rng.hpp"

namespace h22 {

/// B_ij = cosh(t_i - t_j) + (s_i - s_j)^2 e^{t_i + t_j} / 2. For a pinning
/// edge pass (t_j, s_j) = (0, 0).
double b_factor(double ti, double tj, double si, double sj);

/// Terms of a log density; total() is their sum.
struct LogDensityParts {
  double site_term = 0.0;     // -sum_j t_j
  double edge_term = 0.0;     // -sum_E beta_ij (B_ij - 1)
  double pinning_term = 0.0;  // -sum_V eps_i (B_i,rho - 1)
  double det_term = 0.0;      // determinant or tree-weight contribution
  double constant = 0.0;      // -log(2 pi) per vertex (or half of it)

  double total() const noexcept { return site_term + edge_term + pinning_term + det_term + constant; }
};

/// Log density of the (t, s)-marginal: the tree sum is replaced by det(A + eps_hat).
LogDensityParts log_density_ts_parts(const AugmentedGraph& ag, std::span<const double> t,
                                     std::span<const double> s);
double log_density_ts(const AugmentedGraph& ag, std::span<const double> t, std::span<const double> s);

/// Log density of the t-marginal, obtained by integrating out the Gaussian s:
///   -sum t_j - (n/2) log 2pi - sum_E beta (cosh(t_i - t_j) - 1)
///   - sum_V eps_i (cosh t_i - 1) + (1/2) log det(A + eps_hat).
LogDensityParts log_density_t_parts(const AugmentedGraph& ag, std::span<const double> t);
double log_density_t(const AugmentedGraph& ag, std::span<const double> t);

/// Log density of the full joint law of (t, s, T) with respect to Lebesgue x counting measure.
double log_density_joint(const AugmentedGraph& ag, std::span<const double> t, std::span<const double> s,
                         const SpanningTree& tree);

/// Centered Gaussian with precision A(t) + eps_hat(t).
Eigen::VectorXd sample_s_given_t(const AugmentedGraph& ag, std::span<const double> t, Rng& rng);

}  // namespace h22
