#include "h22/observables.hpp"

#include <cmath>

#include "h22/error.hpp"
#include "h22/linalg.hpp"

namespace h22 {

namespace {

void check_pair(std::span<const double> pi, Vertex x, Vertex y) {
  if (x >= pi.size() || y >= pi.size()) throw DimensionError("observable: vertex out of range");
  if (x == y) throw DimensionError("observable: requires two different vertices");
  if (!(pi[x] > 0.0) || !(pi[y] > 0.0)) throw PinningError("observable: requires pi_x > 0 and pi_y > 0");
}

/// e^{t_x+t_y} / (a e^{t_x} + b e^{t_y}), written to avoid overflow.
double harmonic_prefactor(double tx, double ty, double a, double b) {
  return 1.0 / (a * std::exp(-ty) + b * std::exp(-tx));
}

}  // namespace

Estimate estimate_series(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  if (values.empty()) throw ConfigError("estimate of an empty series");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= n;
  if (var == 0.0) return {mean, 0.0, n};
  const double ess = effective_sample_size(values);
  return {mean, std::sqrt(var / ess), ess};
}

double obs_q(std::span<const double> t, const SpanningTree& tree, const ForestComponents& comp, Vertex x,
             Vertex y, std::span<const double> pi) {
  check_pair(pi, x, y);
  if (!tree.has_root(x) || !comp.connected(x, y)) return 0.0;
  return harmonic_prefactor(t[x], t[y], pi[x], pi[y]);
}

double obs_q(std::span<const double> t, const SpanningTree& tree, Vertex x, Vertex y,
             std::span<const double> pi) {
  return obs_q(t, tree, ForestComponents(tree), x, y, pi);
}

double green_conditional(const AugmentedGraph& ag, std::span<const double> t, Vertex x, Vertex y) {
  const std::size_t n = ag.vertex_count();
  if (x >= n || y >= n) throw DimensionError("green_conditional: vertex out of range");
  if (x == y) throw DimensionError("green_conditional: requires two different vertices");
  const double ex = ag.eps(x), ey = ag.eps(y);
  if (!(ex + ey > 0.0)) throw PinningError("green_conditional: requires eps_x + eps_y > 0");
  const TreeLaw law(ag, t);
  const double p = law.probability_of([&](const SpanningTree& tree) {
    return (tree.has_root(x) || tree.has_root(y)) && ForestComponents(tree).connected(x, y);
  });
  return harmonic_prefactor(t[x], t[y], ex, ey) * p;
}

Estimate estimate_ward(const SampleBatch& batch, Vertex y) {
  std::vector<double> v;
  v.reserve(batch.size());
  for (const auto& d : batch.draws) v.push_back(std::exp(d.t.at(y)));
  return estimate_series(v);
}

std::vector<std::vector<double>> eps_green_series(const SampleBatch& batch, const AugmentedGraph& ag,
                                                  Vertex x, std::span<const Vertex> targets) {
  const double epsilon = ag.pinning().epsilon();
  for (Vertex y : targets)
    if (y == x || y >= ag.vertex_count()) throw DimensionError("eps_green_series: bad target vertex");
  std::vector<std::vector<double>> out(targets.size());
  for (auto& v : out) v.reserve(batch.size());
  for (const auto& d : batch.draws) {
    PinnedFactorization f(ag, d.t);
    const Eigen::VectorXd col = f.inverse_column(x);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const Vertex y = targets[k];
      out[k].push_back(epsilon * std::exp(d.t[x] + d.t[y]) * col[y]);
    }
  }
  return out;
}

EpsGreenEstimate estimate_eps_green(const SampleBatch& batch, const AugmentedGraph& ag, Vertex x, Vertex y) {
  const auto& pi = ag.pinning().pi();
  check_pair(pi, x, y);
  const Vertex target[] = {y};
  const std::vector<double> matrix = eps_green_series(batch, ag, x, target).front();
  std::vector<double> indicator, diff;
  indicator.reserve(batch.size());
  diff.reserve(batch.size());
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const Draw& d = batch.draws[k];
    const ForestComponents comp(d.tree);
    const double q = obs_q(d.t, d.tree, comp, x, y, pi) + obs_q(d.t, d.tree, comp, y, x, pi);
    indicator.push_back(q);
    diff.push_back(matrix[k] - q);
  }
  EpsGreenEstimate out;
  out.matrix_path = estimate_series(matrix);
  out.indicator_path = estimate_series(indicator);
  out.difference = estimate_series(diff);
  out.consistent = std::abs(out.difference.mean) <= 3.0 * out.difference.std_error;
  return out;
}

std::pair<double, double> split_by_roots(std::span<const double> t, const SpanningTree& tree, Vertex x, Vertex y,
                                         std::span<const double> pi) {
  const double q = obs_q(t, tree, x, y, pi);
  if (q == 0.0) return {0.0, 0.0};
  return tree.root_count() == 1 ? std::pair{q, 0.0} : std::pair{0.0, q};
}

RootDecomposition root_decomposition(const SampleBatch& batch, Vertex x, Vertex y, std::span<const double> pi) {
  std::vector<double> one, multi, total;
  for (const auto& d : batch.draws) {
    auto [a, b] = split_by_roots(d.t, d.tree, x, y, pi);
    one.push_back(a);
    multi.push_back(b);
    total.push_back(a + b);
  }
  return {estimate_series(one), estimate_series(multi), estimate_series(total)};
}

}  // namespace h22
