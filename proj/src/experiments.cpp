#include "h22/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

#include "h22/error.hpp"

namespace h22 {

namespace {

void check_sweep(const Graph& g, const std::vector<double>& pi, Vertex x, Vertex y,
                 const std::vector<double>& eps_list) {
  const std::size_t n = g.vertex_count();
  if (pi.size() != n) throw ConfigError("pinning profile size does not match the graph");
  if (x >= n || y >= n || x == y) throw ConfigError("need two different vertices x, y");
  if (!(pi[x] > 0.0) || !(pi[y] > 0.0)) throw ConfigError("pi_x and pi_y must be positive");
  if (eps_list.empty()) throw ConfigError("empty epsilon list");
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0)) throw ConfigError("epsilon values must be positive");
    if (k > 0 && !(eps_list[k] < eps_list[k - 1])) throw ConfigError("epsilon list must be strictly decreasing");
  }
}

McmcConfig with_seed(McmcConfig cfg, std::uint64_t seed) {
  cfg.seed = seed;
  return cfg;
}

double min_ess(const SampleBatch& batch) {
  const auto ess = effective_sample_size(batch);
  return ess.empty() ? 0.0 : *std::min_element(ess.begin(), ess.end());
}

/// Mean of Q^pi_xy under pinning eps_x delta_x (pi itself unchanged inside Q).
Estimate single_pin_estimate(const Graph& g, const std::vector<double>& pi, Vertex x, Vertex y, double epsilon,
                             const McmcConfig& cfg, double& ess) {
  const AugmentedGraph ag(g, Pinning::at_vertex(g.vertex_count(), x, pi[x], epsilon));
  const SampleBatch batch = run_chain(ag, cfg);
  ess = min_ess(batch);
  std::vector<double> q;
  q.reserve(batch.size());
  for (const auto& d : batch.draws) q.push_back(obs_q(d.t, d.tree, x, y, pi));
  return estimate_series(q);
}

/// Flags the trend as monotone unless some smaller epsilon falls below a
/// larger one by more than 3 combined standard errors.
void mark_monotone(TrendReport& r) {
  r.monotone = true;
  for (std::size_t k = 0; k < r.m.size(); ++k)
    for (std::size_t j = 0; j < r.m.size(); ++j) {
      if (!(r.eps[j] < r.eps[k])) continue;
      const double se = std::hypot(r.m[k].std_error, r.m[j].std_error);
      if (r.m[j].mean < r.m[k].mean - 3.0 * se) r.monotone = false;
    }
}

}  // namespace

nlohmann::json to_json(const Estimate& e) {
  return {{"mean", e.mean}, {"std_error", e.std_error}, {"n_effective", e.n_effective}};
}

SweepResult compare_pinning_sweep(const Graph& g, const std::vector<double>& pi, Vertex x, Vertex y,
                                  const std::vector<double>& eps_list, const McmcConfig& cfg) {
  check_sweep(g, pi, x, y, eps_list);
  validate(cfg);
  SweepResult out{pi, x, y, cfg, {}};
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    const double epsilon = eps_list[k];
    SweepRow row;
    row.epsilon = epsilon;

    const AugmentedGraph ag(g, Pinning(pi, epsilon));
    const SampleBatch batch = run_chain(ag, with_seed(cfg, derive_seed(cfg.seed, 3 * k)));
    const EpsGreenEstimate eg = estimate_eps_green(batch, ag, x, y);
    row.eps_green = eg.matrix_path;
    row.eps_green_indicator = eg.indicator_path;
    row.identity_consistent = eg.consistent;

    std::vector<double> one, multi, one_xy, one_yx;
    for (const auto& d : batch.draws) {
      auto [a, b] = split_by_roots(d.t, d.tree, x, y, pi);
      auto [c, e] = split_by_roots(d.t, d.tree, y, x, pi);
      one.push_back(a + c);
      multi.push_back(b + e);
      one_xy.push_back(a);
      one_yx.push_back(c);
    }
    row.one_root = estimate_series(one);
    row.multi_root = estimate_series(multi);
    row.one_root_xy = estimate_series(one_xy);
    row.one_root_yx = estimate_series(one_yx);

    double ess_x = 0.0, ess_y = 0.0;
    row.singlepin_x = single_pin_estimate(g, pi, x, y, epsilon, with_seed(cfg, derive_seed(cfg.seed, 3 * k + 1)), ess_x);
    row.singlepin_y = single_pin_estimate(g, pi, y, x, epsilon, with_seed(cfg, derive_seed(cfg.seed, 3 * k + 2)), ess_y);
    row.ess_min = std::min({min_ess(batch), ess_x, ess_y});
    out.rows.push_back(row);
  }
  return out;
}

LimitEstimate limit_of(const std::vector<double>& eps, const std::vector<Estimate>& values) {
  if (eps.size() != values.size() || eps.empty()) throw ConfigError("limit_of: mismatched inputs");
  LimitEstimate out;
  const auto smallest = std::min_element(eps.begin(), eps.end()) - eps.begin();
  out.smallest = values[static_cast<std::size_t>(smallest)];
  if (eps.size() < 2) {
    out.extrapolated = out.smallest;
    return out;
  }
  std::vector<double> y, sigma;
  double floor = 0.0;
  for (const auto& v : values) floor = std::max(floor, v.std_error);
  floor = floor > 0.0 ? floor * 1e-6 : 1e-300;
  for (const auto& v : values) {
    y.push_back(v.mean);
    sigma.push_back(std::max(v.std_error, floor));
  }
  const stats::LineFit fit = stats::fit_line(eps, y, sigma);
  out.extrapolated = {fit.intercept, fit.intercept_se, out.smallest.n_effective};
  return out;
}

PowerFit fit_power(const std::vector<double>& eps, const std::vector<Estimate>& values) {
  if (eps.size() != values.size()) throw ConfigError("fit_power: mismatched inputs");
  PowerFit out;
  out.identically_zero = std::all_of(values.begin(), values.end(),
                                     [](const Estimate& e) { return e.mean == 0.0 && e.std_error == 0.0; });
  if (out.identically_zero) return out;
  std::vector<double> lx, ly, sigma;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(values[k].mean > 0.0)) continue;
    lx.push_back(std::log(eps[k]));
    ly.push_back(std::log(values[k].mean));
    sigma.push_back(std::max(values[k].std_error / values[k].mean, 1e-12));
  }
  out.points = lx.size();
  if (out.points < 2) throw ConfigError("fit_power: fewer than two positive estimates");
  const stats::LineFit fit = stats::fit_line(lx, ly, sigma);
  out.power = fit.slope;
  out.power_se = fit.slope_se;
  return out;
}

TrendReport one_root_monotonicity(const Graph& g, const std::vector<double>& pi, Vertex x, Vertex y,
                                  const std::vector<double>& eps_list, const McmcConfig& cfg) {
  check_sweep(g, pi, x, y, eps_list);
  validate(cfg);
  TrendReport out;
  const double pi_sum = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    const double epsilon = eps_list[k];
    const AugmentedGraph ag(g, Pinning(pi, epsilon));
    const SampleBatch batch = run_chain(ag, with_seed(cfg, derive_seed(cfg.seed, k)));
    const double scale = std::exp(-epsilon * pi_sum);
    std::vector<double> m;
    m.reserve(batch.size());
    for (const auto& d : batch.draws) m.push_back(scale * split_by_roots(d.t, d.tree, x, y, pi).first);
    out.eps.push_back(epsilon);
    out.m.push_back(estimate_series(m));
  }
  mark_monotone(out);
  return out;
}

TrendReport one_root_monotonicity(const SweepResult& sweep) {
  TrendReport out;
  const double pi_sum = std::accumulate(sweep.pi.begin(), sweep.pi.end(), 0.0);
  for (const auto& row : sweep.rows) {
    const double scale = std::exp(-row.epsilon * pi_sum);
    out.eps.push_back(row.epsilon);
    out.m.push_back({scale * row.one_root_xy.mean, scale * row.one_root_xy.std_error, row.one_root_xy.n_effective});
  }
  mark_monotone(out);
  return out;
}

DecayFit ladder_decay(const LadderSpec& spec, const std::vector<double>& pi, double epsilon,
                      const std::vector<std::pair<Vertex, Vertex>>& pairs, const McmcConfig& cfg) {
  const Graph g = build_ladder(spec);
  const std::size_t n = g.vertex_count();
  if (pi.size() != n) throw ConfigError("pinning profile size does not match the ladder");
  std::set<std::size_t> distances;
  for (auto [x, y] : pairs) {
    if (x >= n || y >= n || x == y) throw ConfigError("ladder pair must be two different vertices");
    if (!(pi[x] > 0.0) || !(pi[y] > 0.0)) throw ConfigError("ladder pair needs pi_x, pi_y > 0");
    if (const std::size_t d = horizontal_distance(g, x, y); d > 0) distances.insert(d);
  }
  if (distances.size() < 3) throw ConfigError("ladder decay needs at least 3 distinct nonzero horizontal distances");

  const AugmentedGraph ag(g, Pinning(pi, epsilon));
  const SampleBatch batch = run_chain(ag, cfg);

  std::map<Vertex, std::vector<Vertex>> by_source;
  for (auto [x, y] : pairs) by_source[x].push_back(y);
  std::map<std::pair<Vertex, Vertex>, Estimate> estimates;
  for (const auto& [x, targets] : by_source) {
    const auto series = eps_green_series(batch, ag, x, targets);
    for (std::size_t k = 0; k < targets.size(); ++k) estimates[{x, targets[k]}] = estimate_series(series[k]);
  }

  DecayFit fit;
  std::vector<double> dx, ly, sigma;
  for (auto [x, y] : pairs) {
    DecayPoint p{x, y, horizontal_distance(g, x, y), estimates.at({x, y}), 1.0 / std::min(pi[x], pi[y])};
    if (p.distance == 0) {
      fit.excluded.push_back(p);
      continue;
    }
    if (!(p.estimate.mean > 0.0)) {
      fit.warnings.push_back("pair (" + std::to_string(x + 1) + "," + std::to_string(y + 1) +
                             ") has a nonpositive estimate and is excluded");
      fit.excluded.push_back(p);
      continue;
    }
    fit.points.push_back(p);
    dx.push_back(static_cast<double>(p.distance));
    ly.push_back(std::log(p.estimate.mean));
    sigma.push_back(std::max(p.estimate.std_error / p.estimate.mean, 1e-12));
  }
  std::set<double> used(dx.begin(), dx.end());
  if (used.size() < 3) throw DiagnosticError("ladder decay: fewer than 3 distances with positive estimates");
  const stats::LineFit line = stats::fit_line(dx, ly, sigma);
  fit.slope = line.slope;
  fit.slope_se = line.slope_se;
  fit.ci_low = line.slope - stats::kZ99 * line.slope_se;
  fit.ci_high = line.slope + stats::kZ99 * line.slope_se;
  fit.intercept = line.intercept;
  fit.intercept_se = line.intercept_se;
  fit.chi2 = line.chi2;
  fit.dof = line.dof;
  return fit;
}

bool IndependenceReport::passes(double alpha) const {
  auto ok = [alpha](const NamedTest& t) { return t.result.p_value > alpha; };
  return std::all_of(correlations.begin(), correlations.end(), ok) && ks_tx.p_value > alpha &&
         std::all_of(gradient_ks.begin(), gradient_ks.end(), ok);
}

std::size_t decorrelation_stride(const SampleBatch& batch) {
  double worst = 1.0;
  for (double v : batch.iact) worst = std::max(worst, v);
  return static_cast<std::size_t>(std::ceil(worst));
}

std::vector<std::pair<std::string, std::vector<double>>> rescaled_gradients(const SampleBatch& batch, Vertex x,
                                                                            std::size_t stride) {
  std::vector<std::pair<std::string, std::vector<double>>> out;
  const std::size_t n = batch.draws.front().t.size();
  for (Vertex i = 0; i < n; ++i) {
    if (i == x) continue;
    std::vector<double> dt, ds;
    for (std::size_t k = 0; k < batch.size(); k += stride) {
      const Draw& d = batch.draws[k];
      dt.push_back(d.t[i] - d.t[x]);
      ds.push_back((d.s[i] - d.s[x]) * std::exp(d.t[x]));
    }
    out.emplace_back("dt" + std::to_string(i + 1), std::move(dt));
    out.emplace_back("ds" + std::to_string(i + 1), std::move(ds));
  }
  return out;
}

std::vector<NamedTest> dependence_tests(const SampleBatch& batch, Vertex x, std::size_t stride, Rng& rng) {
  std::vector<double> tx, sx;
  for (std::size_t k = 0; k < batch.size(); k += stride) {
    tx.push_back(batch.draws[k].t[x]);
    sx.push_back(batch.draws[k].s[x]);
  }
  std::vector<NamedTest> out;
  for (const auto& [name, series] : rescaled_gradients(batch, x, stride)) {
    out.push_back({"t_x~" + name, stats::permutation_correlation_test(tx, series, kPermutations, rng)});
    out.push_back({"s_x~" + name, stats::permutation_correlation_test(sx, series, kPermutations, rng)});
  }
  return out;
}

stats::GridCdf single_site_t_cdf(double eps_x) {
  const double reach = std::log(2.0 / eps_x) + 8.0;
  auto pdf = [eps_x](double t) {
    return std::sqrt(eps_x / (2.0 * std::numbers::pi)) * std::exp(-0.5 * t - eps_x * (std::cosh(t) - 1.0));
  };
  return stats::GridCdf(pdf, -reach, reach);
}

IndependenceReport independence_test(const AugmentedGraph& ag, Vertex x, const McmcConfig& cfg) {
  const std::size_t n = ag.vertex_count();
  if (x >= n) throw ConfigError("independence test: vertex out of range");
  if (n < 2) throw ConfigError("independence test needs at least two vertices");
  for (Vertex i = 0; i < n; ++i)
    if ((i == x) != (ag.eps(i) > 0.0)) throw ConfigError("independence test requires pinning exactly at x");
  validate(cfg);

  IndependenceReport rep;
  rep.x = x;
  rep.eps_x = ag.eps(x);
  const SampleBatch batch = run_chain(ag, with_seed(cfg, derive_seed(cfg.seed, 0)));
  const AugmentedGraph unit(ag.base(), Pinning::at_vertex(n, x, 1.0, 1.0));
  const SampleBatch reference = run_chain(unit, with_seed(cfg, derive_seed(cfg.seed, 1)));
  rep.stride = std::max(decorrelation_stride(batch), decorrelation_stride(reference));
  Rng rng(derive_seed(cfg.seed, 2));

  rep.correlations = dependence_tests(batch, x, rep.stride, rng);
  std::vector<double> tx;
  for (std::size_t k = 0; k < batch.size(); k += rep.stride) tx.push_back(batch.draws[k].t[x]);
  rep.n_used = tx.size();
  rep.ks_tx = stats::ks_test(tx, single_site_t_cdf(rep.eps_x));

  const auto a = rescaled_gradients(batch, x, rep.stride);
  const auto b = rescaled_gradients(reference, x, rep.stride);
  for (std::size_t k = 0; k < a.size(); ++k)
    rep.gradient_ks.push_back({a[k].first, stats::ks_two_sample(a[k].second, b[k].second)});
  rep.ward = estimate_ward(batch, x);
  return rep;
}

IndependenceReport independence_test(const Graph& g, Vertex x, double eps_x, const McmcConfig& cfg) {
  if (x >= g.vertex_count()) throw ConfigError("independence test: vertex out of range");
  const AugmentedGraph ag(g, Pinning::at_vertex(g.vertex_count(), x, 1.0, eps_x));
  return independence_test(ag, x, cfg);
}

}  // namespace h22
