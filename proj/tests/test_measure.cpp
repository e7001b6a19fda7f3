#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/LU>

#include "doctest.h"
#include "h22/error.hpp"
#include "h22/linalg.hpp"
#include "h22/measure.hpp"
#include "h22/stats.hpp"
#include "support.hpp"

using namespace h22;

namespace {

const Graph kSingle = Graph::build(1, {});

/// Half-width of the s range at field t: 12 conditional standard deviations
/// of a site with pinning eps (precision eps e^t).
double s_reach(double t, double eps) { return 12.0 * std::exp(-0.5 * t) / std::sqrt(eps); }

}  // namespace

TEST_CASE("b factor examples") {
  CHECK(b_factor(0.3, 0.3, 1.2, 1.2) == doctest::Approx(1.0));
  CHECK(b_factor(0.0, 0.0, 2.0, 0.0) == doctest::Approx(3.0));
  CHECK(b_factor(0.0, 0.0, 1.0, 0.0) == doctest::Approx(1.5));
  CHECK_THROWS_AS(b_factor(800.0, 0.0, 0.0, 0.0), NumericalError);
  CHECK_THROWS_AS(b_factor(360.0, 360.0, 1.0, 0.0), NumericalError);
}

TEST_CASE("single-site (t,s) density at the origin") {
  const AugmentedGraph ag(kSingle, Pinning({1.0}, 1.0));
  const std::vector<double> zero{0.0};
  CHECK(log_density_ts(ag, zero, zero) == doctest::Approx(-std::log(2.0 * std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("single-site (t,s) density integrates to one") {
  const AugmentedGraph ag(kSingle, Pinning({1.0}, 1.0));
  const double mass = stats::integrate(
      [&](double t) {
        const double w = s_reach(t, 1.0);
        return stats::integrate(
            [&](double s) {
              const double tv[] = {t}, sv[] = {s};
              return std::exp(log_density_ts(ag, tv, sv));
            },
            -w, w, 1e-12);
      },
      -8.0, 8.0, 1e-10);
  CHECK(std::abs(mass - 1.0) <= 1e-6);
}

TEST_CASE("single-site t density matches the closed form") {
  for (double eps : {1.0, 0.5, 0.05}) {
    const AugmentedGraph ag(kSingle, Pinning({1.0}, eps));
    for (double t = -6.0; t <= 6.0; t += 0.25) {
      const double tv[] = {t};
      const double closed = 0.5 * std::log(eps / (2.0 * std::numbers::pi)) - 0.5 * t - eps * (std::cosh(t) - 1.0);
      CHECK(std::abs(std::exp(log_density_t(ag, tv)) - std::exp(closed)) <= 1e-10);
    }
  }
}

TEST_CASE("single-site t density integrates to one") {
  const AugmentedGraph ag(kSingle, Pinning({1.0}, 1.0));
  const double mass = stats::integrate(
      [&](double t) {
        const double tv[] = {t};
        return std::exp(log_density_t(ag, tv));
      },
      -8.0, 8.0, 1e-12);
  CHECK(std::abs(mass - 1.0) <= 1e-6);
}

TEST_CASE("K2 t density integrates to one") {
  const AugmentedGraph ag(complete_graph(2), Pinning({1.0, 1.0}, 1.0));
  const double mass = stats::integrate_2d(
      [&](double a, double b) {
        const double tv[] = {a, b};
        return std::exp(log_density_t(ag, tv));
      },
      -8.0, 8.0, -8.0, 8.0, 1e-8);
  CHECK(std::abs(mass - 1.0) <= 1e-4);
}

TEST_CASE("t density equals the s integral of the (t,s) density") {
  SUBCASE("single site") {
    const AugmentedGraph ag(kSingle, Pinning({1.0}, 0.7));
    for (double t : {-1.5, 0.0, 0.8, 2.0}) {
      const double w = s_reach(t, 0.7);
      const double tv[] = {t};
      const double integral = stats::integrate(
          [&](double s) {
            const double sv[] = {s};
            return std::exp(log_density_ts(ag, tv, sv));
          },
          -w, w, 1e-13);
      CHECK(integral == doctest::Approx(std::exp(log_density_t(ag, tv))).epsilon(1e-6));
    }
  }
  SUBCASE("two sites") {
    const AugmentedGraph ag(complete_graph(2), Pinning({1.0, 0.5}, 1.0));
    const std::vector<std::vector<double>> fields{{0.0, 0.0}, {0.5, -0.4}, {-1.0, 0.3}};
    for (const auto& t : fields) {
      // Twelve single-site standard deviations comfortably cover the Gaussian.
      const double w = 12.0 * std::max(std::exp(-0.5 * t[0]), std::exp(-0.5 * t[1]) / std::sqrt(0.5));
      const double integral = stats::integrate_2d(
          [&](double a, double b) {
            const double sv[] = {a, b};
            return std::exp(log_density_ts(ag, t, sv));
          },
          -w, w, -w, w, 1e-10);
      CHECK(integral == doctest::Approx(std::exp(log_density_t(ag, t))).epsilon(1e-6));
    }
  }
}

TEST_CASE("s enters only through edge differences and pinned sites") {
  const AugmentedGraph ag(complete_graph(2), Pinning({1.0, 0.0}, 1.0));
  const std::vector<double> t{0.4, -0.2};
  const std::vector<double> s{0.3, -0.7};
  for (double c : {-1.0, 0.5, 2.0}) {
    const std::vector<double> shifted{s[0] + c, s[1] + c};
    const double pinned = -0.5 * ag.eps(0) * std::exp(t[0]) * ((s[0] + c) * (s[0] + c) - s[0] * s[0]);
    CHECK(log_density_ts(ag, t, shifted) - log_density_ts(ag, t, s) == doctest::Approx(pinned).epsilon(1e-12));
  }
}

TEST_CASE("joint density factorizes into the (t,s) density and the tree law") {
  Rng rng(6);
  const AugmentedGraph ag(cycle_graph(4), Pinning({1.0, 0.0, 0.5, 1.0}, 0.6));
  const auto trees = enumerate_spanning_trees(ag);
  for (int k = 0; k < 20; ++k) {
    const auto t = test::random_t(4, 2.0, rng);
    const auto s = test::random_t(4, 2.0, rng);
    const auto& tree = trees[rng.below(trees.size())];
    const TreeLaw law(ag, t);
    const double want = log_density_ts(ag, t, s) + law.log_probability(tree);
    CHECK(std::abs(log_density_joint(ag, t, s, tree) - want) <= 1e-10 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("density parts add up") {
  const AugmentedGraph ag(path_graph(3), Pinning::uniform(3, 1.0, 0.5));
  const std::vector<double> t{0.1, -0.3, 0.7};
  const auto parts = log_density_t_parts(ag, t);
  CHECK(parts.total() == doctest::Approx(log_density_t(ag, t)));
  CHECK(parts.det_term == doctest::Approx(0.5 * logdet_pinned(ag, t)));
  CHECK(parts.site_term == doctest::Approx(-0.5));
  CHECK_THROWS_AS(log_density_t(ag, std::vector<double>{0.0, 0.0}), DimensionError);
  CHECK_THROWS_AS(log_density_t(ag, std::vector<double>{0.0, NAN, 0.0}), NumericalError);
}

TEST_CASE("s sampling: single site variance") {
  const AugmentedGraph ag(kSingle, Pinning({1.0}, 1.0));
  const std::vector<double> zero{0.0};
  Rng rng(77);
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double s = sample_s_given_t(ag, zero, rng)[0];
    sum += s;
    sum2 += s * s;
    sum4 += s * s * s * s;
  }
  const double mean = sum / n, var = sum2 / n;
  const double var_se = std::sqrt((sum4 / n - var * var) / n);
  CHECK(std::abs(mean) <= 3.0 / std::sqrt(n));
  CHECK(std::abs(var - 1.0) <= 3.0 * var_se);
}

TEST_CASE("s sampling: covariance is the inverse precision") {
  Rng rng(31);
  std::vector<std::pair<AugmentedGraph, std::vector<double>>> cases{
      {AugmentedGraph(complete_graph(2), Pinning({1.0, 1.0}, 1.0)), {0.0, 0.0}},
      {AugmentedGraph(cycle_graph(4), Pinning({1.0, 0.0, 0.5, 0.0}, 0.8)), {0.3, -0.5, 0.2, 0.6}},
  };
  for (const auto& [ag, t] : cases) {
    const std::size_t d = ag.vertex_count();
    const Eigen::MatrixXd want = pinned_matrix(ag, t).inverse();
    const int n = 100000;
    Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(d, d), m2 = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (int k = 0; k < n; ++k) {
      const Eigen::VectorXd s = sample_s_given_t(ag, t, rng);
      const Eigen::MatrixXd outer = s * s.transpose();
      mean += s;
      m1 += outer;
      m2 += outer.cwiseProduct(outer);
    }
    mean /= n;
    m1 /= n;
    m2 /= n;
    for (std::size_t i = 0; i < d; ++i) {
      CHECK(std::abs(mean[i]) <= 3.0 * std::sqrt(want(i, i) / n));
      for (std::size_t j = 0; j < d; ++j) {
        const double se = std::sqrt((m2(i, j) - m1(i, j) * m1(i, j)) / n);
        CHECK(std::abs(m1(i, j) - want(i, j)) <= 5.0 * se);
      }
    }
  }
}
