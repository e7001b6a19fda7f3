#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <span>

#include "h22/graph.hpp"
#include "h22/pinning.hpp"

namespace h22 {

/// Dense symmetric matrix; both triangles are stored and kept equal.
using SymMatrix = Eigen::MatrixXd;

/// Largest |log conductance| accepted before reporting overflow.
inline constexpr double kMaxLogConductance = 700.0;

/// Relative pivot threshold of the positive-definite factorization.
inline constexpr double kPivotTolerance = 1e-12;

/// beta * exp(ti + tj); throws NumericalError when |ti + tj| exceeds the range.
double conductance(double beta, double ti, double tj);

/// Weighted Laplacian A(t) of the base graph with conductances beta_ij e^{t_i+t_j}.
SymMatrix laplacian(const Graph& g, std::span<const double> t);

/// Diagonal of eps_hat(t): eps_i e^{t_i}.
Eigen::VectorXd pinning_diagonal(const Pinning& p, std::span<const double> t);

/// A(t) + eps_hat(t), the rho-deleted Laplacian of the augmented graph.
SymMatrix pinned_matrix(const AugmentedGraph& ag, std::span<const double> t);

/// Cholesky factorization of A(t) + eps_hat(t).
class PinnedFactorization {
 public:
  explicit PinnedFactorization(SymMatrix m);
  PinnedFactorization(const AugmentedGraph& ag, std::span<const double> t)
      : PinnedFactorization(pinned_matrix(ag, t)) {}

  std::size_t dimension() const noexcept { return matrix_.rows(); }
  const SymMatrix& matrix() const noexcept { return matrix_; }
  double logdet() const noexcept { return logdet_; }

  /// Solves M u = b with one step of iterative refinement.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  /// Column y of M^{-1}.
  Eigen::VectorXd inverse_column(Vertex y) const;
  /// Maps a standard normal vector z to L^{-T} z, which has covariance M^{-1}.
  Eigen::VectorXd whiten_inverse(const Eigen::VectorXd& z) const;

 private:
  SymMatrix matrix_;
  Eigen::LLT<SymMatrix> llt_;
  double logdet_ = 0.0;
};

double logdet_pinned(const AugmentedGraph& ag, std::span<const double> t);
double logdet_pinned(const Graph& g, const Pinning& p, std::span<const double> t);

/// G_xy = e^{t_x+t_y} (A(t)+eps_hat)^{-1}_xy for x != y.
double green_entry(const AugmentedGraph& ag, std::span<const double> t, Vertex x, Vertex y);
double green_entry(const Graph& g, const Pinning& p, std::span<const double> t, Vertex x,
                   Vertex y);

/// (-1)^{x+y} det of M with row y and column x removed.
double signed_minor_det(const SymMatrix& m, Vertex x, Vertex y);

}  // namespace h22
