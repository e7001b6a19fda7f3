#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "h22/rng.hpp"

namespace h22::stats {

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance `tol`.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10,
                 int max_depth = 50);

/// Nested adaptive Simpson over [ax, bx] x [ay, by].
double integrate_2d(const std::function<double(double, double)>& f, double ax, double bx, double ay, double by,
                    double tol = 1e-8);

/// CDF of a one-dimensional density tabulated on a grid and interpolated linearly.
class GridCdf {
 public:
  /// `pdf` need not be normalized; the table is scaled to end at 1.
  GridCdf(const std::function<double(double)>& pdf, double lo, double hi, std::size_t cells = 4000);
  double operator()(double x) const;
  /// Integral of the pdf before normalization.
  double mass() const noexcept { return mass_; }

 private:
  double lo_, hi_, width_, mass_ = 0.0;
  std::vector<double> cum_;
};

/// Asymptotic Kolmogorov tail probability P(K > lambda).
double kolmogorov_tail(double lambda);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test.
TestResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);
/// Two-sample Kolmogorov-Smirnov test.
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Pearson correlation.
double correlation(std::span<const double> x, std::span<const double> y);
/// Ranks 1..n, ties averaged.
std::vector<double> ranks(std::span<const double> x);

/// Rank correlation with a two-sided permutation p-value (1 + #extreme) / (1 + permutations).
TestResult permutation_correlation_test(std::span<const double> x, std::span<const double> y,
                                        std::size_t permutations, Rng& rng);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double intercept_se = 0.0;
  double chi2 = 0.0;
  std::size_t dof = 0;
};

/// Weighted least squares y = a + b x with per-point standard deviations.
/// Standard errors are inflated by sqrt(chi2/dof) when that exceeds 1.
LineFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> sigma);

/// Two-sided standard normal quantile for 99% intervals.
inline constexpr double kZ99 = 2.5758293035489004;

}  // namespace h22::stats
