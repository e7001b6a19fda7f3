#pragma once

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <vector>

#include "h22/graph.hpp"
#include "h22/rng.hpp"

namespace h22::test {

inline std::vector<double> random_t(std::size_t n, double range, Rng& rng) {
  std::vector<double> t(n);
  for (double& v : t) v = range * (2.0 * rng.uniform() - 1.0);
  return t;
}

/// Connected random graph: a random recursive tree plus extra edges.
inline Graph random_graph(std::size_t n, Rng& rng) {
  std::vector<Edge> edges;
  std::vector<std::vector<char>> adjacent(n, std::vector<char>(n, 0));
  for (Vertex i = 1; i < n; ++i) {
    const auto j = static_cast<Vertex>(rng.below(i));
    edges.push_back({j, i, 0.5 + rng.uniform()});
    adjacent[i][j] = adjacent[j][i] = 1;
  }
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j)
      if (!adjacent[i][j] && rng.uniform() < 0.3) edges.push_back({i, j, 0.5 + rng.uniform()});
  return Graph::build(n, edges);
}

/// Pearson chi-square p-value of observed counts against cell probabilities.
/// Cells expecting fewer than 5 counts are pooled into one.
inline double chi_square_p(const std::vector<double>& counts, const std::vector<double>& probs) {
  double total = 0.0;
  for (double c : counts) total += c;
  double stat = 0.0, pooled_count = 0.0, pooled_expected = 0.0;
  std::size_t cells = 0;
  auto add = [&](double observed, double expected) {
    stat += (observed - expected) * (observed - expected) / expected;
    ++cells;
  };
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double expected = total * probs[k];
    if (expected < 5.0) {
      pooled_count += counts[k];
      pooled_expected += expected;
    } else {
      add(counts[k], expected);
    }
  }
  if (pooled_expected > 0.0) add(pooled_count, pooled_expected);
  if (cells < 2) return 1.0;
  return boost::math::gamma_q(0.5 * static_cast<double>(cells - 1), 0.5 * stat);
}

}  // namespace h22::test
