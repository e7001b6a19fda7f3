#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "h22/graph.hpp"
#include "h22/observables.hpp"
#include "h22/sampler.hpp"
#include "h22/stats.hpp"

namespace h22 {

/// Default epsilon sweep, decreasing.
inline const std::vector<double> kDefaultEpsSweep{0.2, 0.1, 0.05, 0.02, 0.01, 0.005};

struct SweepRow {
  double epsilon = 0.0;
  Estimate eps_green;            // epsilon E[G_xy] under general pinning, matrix path
  Estimate eps_green_indicator;  // same, E[Q_xy + Q_yx]
  bool identity_consistent = false;
  Estimate singlepin_x;  // E[Q^pi_xy] under pinning eps_x delta_x
  Estimate singlepin_y;  // E[Q^pi_yx] under pinning eps_y delta_y
  Estimate one_root;     // E[Q_xy 1{R={x}} + Q_yx 1{R={y}}]
  Estimate multi_root;   // E[(Q_xy + Q_yx) 1{|R|>1}]
  Estimate one_root_xy;  // E[Q_xy 1{R={x}}]
  Estimate one_root_yx;  // E[Q_yx 1{R={y}}]
  double ess_min = 0.0;
};

struct SweepResult {
  std::vector<double> pi;
  Vertex x = 0, y = 0;
  McmcConfig config;
  std::vector<SweepRow> rows;
};

/// For each epsilon runs three chains (general pinning, pinning at x, pinning
/// at y) with seeds derive_seed(cfg.seed, 3k + j).
SweepResult compare_pinning_sweep(const Graph& g, const std::vector<double>& pi, Vertex x, Vertex y,
                                  const std::vector<double>& eps_list, const McmcConfig& cfg);

/// Smallest-epsilon value and the intercept of a linear fit in epsilon.
struct LimitEstimate {
  Estimate smallest;
  Estimate extrapolated;
};
LimitEstimate limit_of(const std::vector<double>& eps, const std::vector<Estimate>& values);

/// Slope of log(value) against log(epsilon) over the strictly positive values.
struct PowerFit {
  double power = 0.0;
  double power_se = 0.0;
  std::size_t points = 0;
  bool identically_zero = false;  // every value exactly 0 with zero error
};
PowerFit fit_power(const std::vector<double>& eps, const std::vector<Estimate>& values);

struct TrendReport {
  std::vector<double> eps;
  std::vector<Estimate> m;  // e^{-epsilon sum pi} E[Q_xy 1{R={x}}]
  bool monotone = false;    // m(eps') >= m(eps) - 3 SE whenever eps' < eps
};

TrendReport one_root_monotonicity(const Graph& g, const std::vector<double>& pi, Vertex x, Vertex y,
                                  const std::vector<double>& eps_list, const McmcConfig& cfg);
/// Same trend from the one-root column of an existing sweep.
TrendReport one_root_monotonicity(const SweepResult& sweep);

struct DecayPoint {
  Vertex x = 0, y = 0;
  std::size_t distance = 0;
  Estimate estimate;  // epsilon E[G_xy]
  double c3 = 0.0;    // 1 / min(pi_x, pi_y)
};

struct DecayFit {
  std::vector<DecayPoint> points;    // used in the slope fit
  std::vector<DecayPoint> excluded;  // distance 0 or nonpositive estimate
  std::vector<std::string> warnings;
  double slope = 0.0;
  double slope_se = 0.0;
  double ci_low = 0.0;  // 99% interval for the slope
  double ci_high = 0.0;
  double intercept = 0.0;
  double intercept_se = 0.0;
  double chi2 = 0.0;
  std::size_t dof = 0;
};

DecayFit ladder_decay(const LadderSpec& spec, const std::vector<double>& pi, double epsilon,
                      const std::vector<std::pair<Vertex, Vertex>>& pairs, const McmcConfig& cfg);

struct NamedTest {
  std::string name;
  stats::TestResult result;
};

struct IndependenceReport {
  Vertex x = 0;
  double eps_x = 0.0;
  std::size_t stride = 1;  // thinning applied before the tests
  std::size_t n_used = 0;
  std::vector<NamedTest> correlations;  // (t_x or s_x) vs each rescaled gradient
  stats::TestResult ks_tx;              // t_x against its exact marginal
  std::vector<NamedTest> gradient_ks;   // gradients at eps_x vs at 1
  Estimate ward;                        // E[e^{t_x}]

  bool passes(double alpha) const;
};

inline constexpr std::size_t kPermutations = 2999;

/// Rescaled gradients (t_i - t_x, (s_i - s_x) e^{t_x}) for i != x, one series per coordinate.
std::vector<std::pair<std::string, std::vector<double>>> rescaled_gradients(const SampleBatch& batch, Vertex x,
                                                                            std::size_t stride);

/// Permutation rank-correlation tests between (t_x, s_x) and every rescaled gradient.
std::vector<NamedTest> dependence_tests(const SampleBatch& batch, Vertex x, std::size_t stride, Rng& rng);

/// Stride that makes retained draws roughly independent: ceil(max IACT).
std::size_t decorrelation_stride(const SampleBatch& batch);

/// CDF of t_x under pinning eps_x delta_x: density sqrt(eps/2pi) e^{-t/2} e^{-eps (cosh t - 1)}.
stats::GridCdf single_site_t_cdf(double eps_x);

IndependenceReport independence_test(const Graph& g, Vertex x, double eps_x, const McmcConfig& cfg);
/// Checks that the pinning is exactly eps_x delta_x, then runs the test.
IndependenceReport independence_test(const AugmentedGraph& ag, Vertex x, const McmcConfig& cfg);

nlohmann::json to_json(const Estimate& e);

}  // namespace h22
