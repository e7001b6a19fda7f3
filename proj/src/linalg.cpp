#include "h22/linalg.hpp"

#include <Eigen/LU>
#include <cmath>
#include <sstream>
#include <string>

#include "h22/error.hpp"

namespace h22 {

namespace {

void check_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw DimensionError(std::string(what) + ": expected " + std::to_string(want) +
                         " entries, got " + std::to_string(got));
}

}  // namespace

double conductance(double beta, double ti, double tj) {
  const double s = ti + tj;
  if (!std::isfinite(s) || std::abs(s) > kMaxLogConductance) {
    std::ostringstream msg;
    msg << "conductance overflow: |t_i + t_j| = " << std::abs(s) << " exceeds "
        << kMaxLogConductance;
    throw NumericalError(msg.str());
  }
  return beta * std::exp(s);
}

SymMatrix laplacian(const Graph& g, std::span<const double> t) {
  const std::size_t n = g.vertex_count();
  check_size(t.size(), n, "laplacian");
  SymMatrix a = SymMatrix::Zero(n, n);
  for (const Edge& e : g.edges()) {
    const double c = conductance(e.beta, t[e.u], t[e.v]);
    a(e.u, e.v) -= c;
    a(e.v, e.u) -= c;
    a(e.u, e.u) += c;
    a(e.v, e.v) += c;
  }
  return a;
}

Eigen::VectorXd pinning_diagonal(const Pinning& p, std::span<const double> t) {
  check_size(t.size(), p.size(), "pinning_diagonal");
  Eigen::VectorXd d(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double e = p.eps(i);
    d[i] = e > 0.0 ? conductance(e, t[i], 0.0) : 0.0;
  }
  return d;
}

SymMatrix pinned_matrix(const AugmentedGraph& ag, std::span<const double> t) {
  SymMatrix m = laplacian(ag.base(), t);
  m.diagonal() += pinning_diagonal(ag.pinning(), t);
  return m;
}

PinnedFactorization::PinnedFactorization(SymMatrix m) : matrix_(std::move(m)), llt_(matrix_) {
  bool ok = llt_.info() == Eigen::Success;
  double worst = 1.0;
  if (ok) {
    const auto& l = llt_.matrixLLT();
    for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
      const double pivot = l(i, i) * l(i, i);
      const double rel = pivot / matrix_(i, i);
      worst = std::min(worst, rel);
      if (!(rel > kPivotTolerance)) ok = false;
      logdet_ += 2.0 * std::log(l(i, i));
    }
  }
  if (!ok) {
    // Pivoted LDL^T only to describe the failure.
    Eigen::LDLT<SymMatrix> ldlt(matrix_);
    std::ostringstream msg;
    msg << "A(t)+eps_hat is not numerically positive definite (smallest relative pivot "
        << worst << ", smallest LDL^T pivot " << ldlt.vectorD().minCoeff() << ")";
    throw NumericalError(msg.str());
  }
}

Eigen::VectorXd PinnedFactorization::solve(const Eigen::VectorXd& b) const {
  Eigen::VectorXd u = llt_.solve(b);
  Eigen::VectorXd r = b - matrix_ * u;
  u += llt_.solve(r);
  return u;
}

Eigen::VectorXd PinnedFactorization::inverse_column(Vertex y) const {
  if (y >= dimension()) throw DimensionError("inverse_column: vertex out of range");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dimension());
  e[y] = 1.0;
  return solve(e);
}

Eigen::VectorXd PinnedFactorization::whiten_inverse(const Eigen::VectorXd& z) const {
  // M = L L^T, so Cov(L^{-T} z) = L^{-T} L^{-1} = M^{-1}.
  return llt_.matrixU().solve(z);
}

double logdet_pinned(const AugmentedGraph& ag, std::span<const double> t) {
  return PinnedFactorization(ag, t).logdet();
}

double logdet_pinned(const Graph& g, const Pinning& p, std::span<const double> t) {
  return logdet_pinned(augment(g, p), t);
}

double green_entry(const AugmentedGraph& ag, std::span<const double> t, Vertex x, Vertex y) {
  const std::size_t n = ag.vertex_count();
  if (x >= n || y >= n) throw DimensionError("green_entry: vertex out of range");
  if (x == y) throw DimensionError("green_entry: requires two different vertices");
  PinnedFactorization f(ag, t);
  return std::exp(t[x] + t[y]) * f.inverse_column(y)[x];
}

double green_entry(const Graph& g, const Pinning& p, std::span<const double> t, Vertex x,
                   Vertex y) {
  return green_entry(augment(g, p), t, x, y);
}

double signed_minor_det(const SymMatrix& m, Vertex x, Vertex y) {
  const auto n = static_cast<std::size_t>(m.rows());
  if (m.cols() != m.rows() || n < 2) throw DimensionError("signed_minor_det: need a square matrix of size >= 2");
  if (x >= n || y >= n) throw DimensionError("signed_minor_det: index out of range");
  Eigen::MatrixXd minor(n - 1, n - 1);
  for (std::size_t r = 0, rr = 0; r < n; ++r) {
    if (r == y) continue;
    for (std::size_t c = 0, cc = 0; c < n; ++c) {
      if (c == x) continue;
      minor(rr, cc++) = m(r, c);
    }
    ++rr;
  }
  const double sign = ((x + y) % 2 == 0) ? 1.0 : -1.0;
  return sign * minor.partialPivLu().determinant();
}

}  // namespace h22
