#include "h22/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "h22/error.hpp"

namespace h22::stats {

namespace {

double simpson(double fa, double fm, double fb, double a, double b) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

double adapt(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
             double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
  // Start from 16 panels so narrow features away from the midpoint are seen.
  constexpr int kPanels = 16;
  const double h = (b - a) / kPanels;
  double total = 0.0;
  for (int k = 0; k < kPanels; ++k) {
    const double lo = a + k * h, hi = lo + h, mid = 0.5 * (lo + hi);
    const double fa = f(lo), fm = f(mid), fb = f(hi);
    total += adapt(f, lo, hi, fa, fm, fb, simpson(fa, fm, fb, lo, hi), tol / kPanels, max_depth);
  }
  return total;
}

double integrate_2d(const std::function<double(double, double)>& f, double ax, double bx, double ay, double by,
                    double tol) {
  const double width = bx - ax;
  return integrate(
      [&](double x) { return integrate([&](double y) { return f(x, y); }, ay, by, tol / (4.0 * width)); }, ax, bx,
      tol);
}

GridCdf::GridCdf(const std::function<double(double)>& pdf, double lo, double hi, std::size_t cells)
    : lo_(lo), hi_(hi), width_((hi - lo) / static_cast<double>(cells)), cum_(cells + 1, 0.0) {
  for (std::size_t k = 0; k < cells; ++k) {
    const double a = lo_ + width_ * static_cast<double>(k);
    cum_[k + 1] = cum_[k] + integrate(pdf, a, a + width_, 1e-13, 30);
  }
  mass_ = cum_.back();
  for (double& c : cum_) c /= mass_;
}

double GridCdf::operator()(double x) const {
  if (x <= lo_) return 0.0;
  if (x >= hi_) return 1.0;
  const double pos = (x - lo_) / width_;
  const auto k = std::min(static_cast<std::size_t>(pos), cum_.size() - 2);
  const double frac = pos - static_cast<double>(k);
  return cum_[k] + frac * (cum_[k + 1] - cum_[k]);
}

double kolmogorov_tail(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

TestResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ConfigError("ks_test: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double rn = std::sqrt(n);
  return {d, kolmogorov_tail((rn + 0.12 + 0.11 / rn) * d)};
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ConfigError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_tail((ne + 0.12 + 0.11 / ne) * d)};
}

double correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("correlation: need two equal-length series");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

TestResult permutation_correlation_test(std::span<const double> x, std::span<const double> y,
                                        std::size_t permutations, Rng& rng) {
  const std::vector<double> rx = ranks(x);
  std::vector<double> ry = ranks(y);
  const double observed = correlation(rx, ry);
  std::size_t extreme = 0;
  for (std::size_t p = 0; p < permutations; ++p) {
    for (std::size_t i = ry.size(); i > 1; --i) std::swap(ry[i - 1], ry[rng.below(i)]);
    if (std::abs(correlation(rx, ry)) >= std::abs(observed)) ++extreme;
  }
  return {observed, static_cast<double>(1 + extreme) / static_cast<double>(1 + permutations)};
}

LineFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> sigma) {
  const std::size_t n = x.size();
  if (y.size() != n || sigma.size() != n || n < 2) throw ConfigError("fit_line: need >= 2 matching points");
  double s = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(sigma[i] > 0.0)) throw ConfigError("fit_line: standard deviations must be positive");
    const double w = 1.0 / (sigma[i] * sigma[i]);
    s += w;
    sx += w * x[i];
    sy += w * y[i];
    sxx += w * x[i] * x[i];
    sxy += w * x[i] * y[i];
  }
  const double det = s * sxx - sx * sx;
  if (!(det > 0.0)) throw ConfigError("fit_line: need at least two distinct x values");
  LineFit fit;
  fit.slope = (s * sxy - sx * sy) / det;
  fit.intercept = (sxx * sy - sx * sxy) / det;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (y[i] - fit.intercept - fit.slope * x[i]) / sigma[i];
    fit.chi2 += r * r;
  }
  fit.dof = n - 2;
  const double inflate = fit.dof > 0 ? std::max(1.0, fit.chi2 / static_cast<double>(fit.dof)) : 1.0;
  fit.slope_se = std::sqrt(s / det * inflate);
  fit.intercept_se = std::sqrt(sxx / det * inflate);
  return fit;
}

}  // namespace h22::stats
