#include "h22/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "h22/error.hpp"
#include "h22/linalg.hpp"
#include "h22/rng.hpp"

namespace h22::oracle {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& v) {
  double top = kNegInf;
  for (double x : v) top = std::max(top, x);
  if (top == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - top);
  return top + std::log(acc);
}

/// Edges of the augmented graph with rho joined to every vertex, including
/// the zero-weight pinning edges (those matter for the minor expansion).
std::vector<Edge> full_edges(const AugmentedGraph& ag) {
  std::vector<Edge> edges = ag.base().edges();
  for (Vertex i = 0; i < ag.vertex_count(); ++i) edges.push_back({i, kRho, ag.eps(i)});
  return edges;
}

bool is_spanning_tree(std::size_t n, const std::vector<Edge>& edges, const std::vector<std::size_t>& pick) {
  std::vector<std::size_t> label(n + 1);
  std::iota(label.begin(), label.end(), std::size_t{0});
  for (std::size_t k : pick) {
    const std::size_t a = label[edges[k].u];
    const std::size_t b = label[edges[k].v == kRho ? n : edges[k].v];
    if (a == b) return false;
    for (auto& l : label)
      if (l == b) l = a;
  }
  return true;  // n edges, no cycle, n+1 vertices
}

double log_edge(const Edge& e, std::span<const double> t) {
  if (!(e.beta > 0.0)) return kNegInf;
  return std::log(e.beta) + t[e.u] + (e.v == kRho ? 0.0 : t[e.v]);
}

std::string graph_instance(const std::string& graph, const std::string& pin, std::size_t sample) {
  return graph + "/" + pin + "/t" + std::to_string(sample);
}

}  // namespace

double cofactor_determinant(const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1.0;
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  double det = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c] == 0.0) continue;
    std::vector<std::vector<double>> sub(n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) sub[r - 1].push_back(m[r][k]);
    det += ((c % 2 == 0) ? 1.0 : -1.0) * m[0][c] * cofactor_determinant(sub);
  }
  return det;
}

TreeList::TreeList(const AugmentedGraph& ag) : n_(ag.vertex_count()), edges_(full_edges(ag)) {
  const std::size_t n = n_;
  const std::vector<Edge>& edges = edges_;
  const std::size_t m = edges.size();
  // Walk all n-subsets of the m edges in lexicographic order.
  std::vector<std::size_t> pick(n);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  while (true) {
    if (is_spanning_tree(n, edges, pick)) trees_.push_back(pick);
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == m - n + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
}

double TreeList::log_weight(std::size_t k, std::span<const double> t) const {
  double acc = 0.0;
  for (std::size_t e : trees_.at(k)) acc += log_edge(edges_[e], t);
  return acc;
}

double TreeList::log_total(std::span<const double> t) const {
  std::vector<double> lw;
  for (std::size_t k = 0; k < trees_.size(); ++k) lw.push_back(log_weight(k, t));
  return log_sum_exp(lw);
}

bool TreeList::rooted_at_and_joined(std::size_t k, Vertex x, Vertex y) const {
  const std::size_t n = n_;
  const std::vector<Edge>& edges = edges_;
  bool rooted = false;
  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), std::size_t{0});
  for (std::size_t e : trees_.at(k)) {
    const Edge& ed = edges[e];
    if (ed.v == kRho) {
      rooted = rooted || ed.u == x;
      continue;
    }
    const std::size_t a = label[ed.u], b = label[ed.v];
    for (auto& l : label)
      if (l == b) l = a;
  }
  return rooted && label[x] == label[y];
}

namespace {

Comparison matrix_tree(const AugmentedGraph& ag, const TreeList& trees, std::span<const double> t) {
  return {logdet_pinned(ag, t), trees.log_total(t)};
}

double forest_sum(const TreeList& trees, std::span<const double> t, Vertex x,
                  Vertex y) {
  const std::vector<Edge>& edges = trees.edges();
  double sum = 0.0;
  for (std::size_t k = 0; k < trees.trees().size(); ++k) {
    if (!trees.rooted_at_and_joined(k, x, y)) continue;
    double prod = 1.0;
    for (std::size_t e : trees.trees()[k]) {
      const Edge& ed = edges[e];
      if (ed.v == kRho && ed.u == x) continue;  // the root x itself is not weighted
      prod *= ed.beta * std::exp(t[ed.u] + (ed.v == kRho ? 0.0 : t[ed.v]));
    }
    sum += prod;
  }
  return sum;
}

Comparison minor_forest(const AugmentedGraph& ag, const TreeList& trees, std::span<const double> t, Vertex x,
                        Vertex y) {
  return {signed_minor_det(pinned_matrix(ag, t), x, y), forest_sum(trees, t, x, y)};
}

double rooted_probability(const TreeList& trees, std::span<const double> t, Vertex x, Vertex y) {
  const double total = trees.log_total(t);
  double p = 0.0;
  for (std::size_t k = 0; k < trees.trees().size(); ++k)
    if (trees.rooted_at_and_joined(k, x, y)) p += std::exp(trees.log_weight(k, t) - total);
  return p;
}

GreenComparison green_formula(const AugmentedGraph& ag, const TreeList& trees, std::span<const double> t,
                              Vertex x, Vertex y) {
  const PinnedFactorization f(ag, t);
  const double inv_xy = f.inverse_column(y)[x];
  const double px = rooted_probability(trees, t, x, y);
  const double py = rooted_probability(trees, t, y, x);
  GreenComparison out;
  out.rooted_x = {ag.eps(x) * std::exp(t[x]) * inv_xy, px};
  out.rooted_y = {ag.eps(y) * std::exp(t[y]) * inv_xy, py};
  const double prefactor = std::exp(t[x] + t[y]) / (ag.eps(x) * std::exp(t[x]) + ag.eps(y) * std::exp(t[y]));
  out.green = {green_entry(ag, t, x, y), prefactor * (px + py)};
  return out;
}

void check_pair(const AugmentedGraph& ag, Vertex x, Vertex y) {
  if (x >= ag.vertex_count() || y >= ag.vertex_count() || x == y)
    throw DimensionError("oracle: need two different vertices of the graph");
}

}  // namespace

Comparison oracle_matrix_tree(const AugmentedGraph& ag, std::span<const double> t) {
  return matrix_tree(ag, TreeList(ag), t);
}

Comparison oracle_minor_forest(const AugmentedGraph& ag, std::span<const double> t, Vertex x, Vertex y) {
  check_pair(ag, x, y);
  return minor_forest(ag, TreeList(ag), t, x, y);
}

GreenComparison oracle_green_formula(const AugmentedGraph& ag, std::span<const double> t, Vertex x, Vertex y) {
  check_pair(ag, x, y);
  if (!(ag.eps(x) + ag.eps(y) > 0.0)) throw PinningError("oracle: requires eps_x + eps_y > 0");
  return green_formula(ag, TreeList(ag), t, x, y);
}

CheckRecord make_record(std::string identity, std::string instance, double lhs, double rhs) {
  const double diff = std::abs(lhs - rhs);
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  const double rel = scale > 0.0 ? diff / scale : 0.0;
  const bool pass = diff <= kAbsoluteTolerance || rel <= kRelativeTolerance;
  return {std::move(identity), std::move(instance), lhs, rhs, rel, pass};
}

CheckRecord make_log_record(std::string identity, std::string instance, double log_lhs, double log_rhs) {
  const double rel = std::abs(std::expm1(log_lhs - log_rhs));
  return {std::move(identity), std::move(instance), log_lhs, log_rhs, rel, rel <= kRelativeTolerance};
}

std::vector<NamedGraph> bundled_corpus() {
  LadderSpec ladder{path_graph(2), 0, 2, {}, {1.0}};
  return {{"path2", path_graph(2)},
          {"path3", path_graph(3)},
          {"cycle4", cycle_graph(4)},
          {"K4", complete_graph(4)},
          {"ladder2x3", build_ladder(ladder)}};
}

std::vector<std::pair<std::string, Pinning>> standard_pinnings(std::size_t n) {
  std::vector<double> mixed(n);
  for (std::size_t i = 0; i < n; ++i) mixed[i] = (i % 3 == 1) ? 0.0 : 0.5 + 0.25 * static_cast<double>(i);
  return {{"uniform", Pinning::uniform(n, 1.0, 1.0)},
          {"single", Pinning::at_vertex(n, 0, 1.0, 1.0)},
          {"mixed", Pinning(mixed, 0.7)}};
}

std::vector<CheckRecord> run_suite(const std::vector<NamedGraph>& corpus, const SuiteOptions& opts) {
  std::vector<CheckRecord> out;
  Rng rng(opts.seed);
  for (const auto& [name, graph] : corpus) {
    const std::size_t n = graph.vertex_count();
    if (n > opts.max_vertices) continue;
    for (const auto& [pin_name, pin] : standard_pinnings(n)) {
      const AugmentedGraph ag(graph, pin);
      const TreeList trees(ag);
      for (std::size_t k = 0; k < opts.t_per_instance; ++k) {
        std::vector<double> t(n);
        for (double& v : t) v = opts.t_range * (2.0 * rng.uniform() - 1.0);
        const std::string inst = graph_instance(name, pin_name, k);

        const Comparison mt = matrix_tree(ag, trees, t);
        out.push_back(make_log_record("matrix_tree", inst, mt.lhs, mt.rhs));
        for (Vertex x = 0; x < n; ++x) {
          for (Vertex y = 0; y < n; ++y) {
            if (x == y) continue;
            const std::string pair = inst + "/x" + std::to_string(x + 1) + "y" + std::to_string(y + 1);
            const Comparison mf = minor_forest(ag, trees, t, x, y);
            out.push_back(make_record("minor_forest", pair, mf.lhs, mf.rhs));
            if (x < y && ag.eps(x) + ag.eps(y) > 0.0) {
              const GreenComparison gc = green_formula(ag, trees, t, x, y);
              out.push_back(make_record("green_rooted_x", pair, gc.rooted_x.lhs, gc.rooted_x.rhs));
              out.push_back(make_record("green_rooted_y", pair, gc.rooted_y.lhs, gc.rooted_y.rhs));
              out.push_back(make_record("green_formula", pair, gc.green.lhs, gc.green.rhs));
            }
          }
        }
      }
    }
  }
  return out;
}

nlohmann::json to_json(const CheckRecord& r) {
  return {{"identity", r.identity}, {"instance", r.instance}, {"lhs", r.lhs},
          {"rhs", r.rhs},           {"rel_gap", r.rel_gap},   {"pass", r.pass}};
}

}  // namespace h22::oracle
