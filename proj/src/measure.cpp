#include "h22/measure.hpp"

#include <cmath>
#include <numbers>

#include "h22/error.hpp"
#include "h22/linalg.hpp"

namespace h22 {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

void check_finite(std::span<const double> v, std::size_t n, const char* what) {
  if (v.size() != n) throw DimensionError(std::string(what) + " has wrong size");
  for (double x : v)
    if (!std::isfinite(x)) throw NumericalError(std::string(what) + " has a nonfinite entry");
}

/// Shared by both marginals: the cosh parts always, the s parts when s is given.
void fill_interaction(const AugmentedGraph& ag, std::span<const double> t, std::span<const double> s,
                      LogDensityParts& parts) {
  const bool with_s = !s.empty();
  for (Vertex j = 0; j < t.size(); ++j) parts.site_term -= t[j];
  for (const Edge& e : ag.base().edges()) {
    const double b = with_s ? b_factor(t[e.u], t[e.v], s[e.u], s[e.v]) : std::cosh(t[e.u] - t[e.v]);
    parts.edge_term -= e.beta * (b - 1.0);
  }
  for (const Edge& e : ag.root_edges()) {
    const double b = with_s ? b_factor(t[e.u], 0.0, s[e.u], 0.0) : std::cosh(t[e.u]);
    parts.pinning_term -= e.beta * (b - 1.0);
  }
}

}  // namespace

double b_factor(double ti, double tj, double si, double sj) {
  const double d = si - sj;
  const double c = std::cosh(ti - tj);
  if (!std::isfinite(c)) throw NumericalError("b_factor: cosh overflow");
  if (d == 0.0) return c;
  return c + 0.5 * d * d * conductance(1.0, ti, tj);
}

LogDensityParts log_density_ts_parts(const AugmentedGraph& ag, std::span<const double> t,
                                     std::span<const double> s) {
  const std::size_t n = ag.vertex_count();
  check_finite(t, n, "t");
  check_finite(s, n, "s");
  LogDensityParts parts;
  fill_interaction(ag, t, s, parts);
  parts.det_term = logdet_pinned(ag, t);
  parts.constant = -static_cast<double>(n) * kLog2Pi;
  return parts;
}

double log_density_ts(const AugmentedGraph& ag, std::span<const double> t, std::span<const double> s) {
  return log_density_ts_parts(ag, t, s).total();
}

LogDensityParts log_density_t_parts(const AugmentedGraph& ag, std::span<const double> t) {
  const std::size_t n = ag.vertex_count();
  check_finite(t, n, "t");
  LogDensityParts parts;
  fill_interaction(ag, t, {}, parts);
  parts.det_term = 0.5 * logdet_pinned(ag, t);
  parts.constant = -0.5 * static_cast<double>(n) * kLog2Pi;
  return parts;
}

double log_density_t(const AugmentedGraph& ag, std::span<const double> t) {
  return log_density_t_parts(ag, t).total();
}

double log_density_joint(const AugmentedGraph& ag, std::span<const double> t, std::span<const double> s,
                         const SpanningTree& tree) {
  const std::size_t n = ag.vertex_count();
  check_finite(t, n, "t");
  check_finite(s, n, "s");
  LogDensityParts parts;
  fill_interaction(ag, t, s, parts);
  parts.det_term = log_tree_weight(tree, t);
  parts.constant = -static_cast<double>(n) * kLog2Pi;
  return parts.total();
}

Eigen::VectorXd sample_s_given_t(const AugmentedGraph& ag, std::span<const double> t, Rng& rng) {
  PinnedFactorization f(ag, t);
  Eigen::VectorXd z(f.dimension());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return f.whiten_inverse(z);
}

}  // namespace h22
