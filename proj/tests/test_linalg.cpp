#include <cmath>
#include <vector>

#include <Eigen/LU>

#include "doctest.h"
#include "h22/error.hpp"
#include "h22/forests.hpp"
#include "h22/linalg.hpp"
#include "h22/rng.hpp"
#include "support.hpp"

using namespace h22;

using test::random_graph;
using test::random_t;

TEST_CASE("laplacian examples") {
  const Graph k2 = complete_graph(2);
  const std::vector<double> zero{0.0, 0.0};
  SymMatrix a = laplacian(k2, zero);
  CHECK(a(0, 0) == 1.0);
  CHECK(a(0, 1) == -1.0);

  const std::vector<double> t{std::log(2.0), 0.0};
  a = laplacian(k2, t);
  CHECK(a(0, 0) == doctest::Approx(2.0));
  CHECK(a(1, 0) == doctest::Approx(-2.0));

  const std::vector<double> z3(3, 0.0);
  a = laplacian(path_graph(3), z3);
  SymMatrix want(3, 3);
  want << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  CHECK((a - want).norm() == 0.0);

  CHECK_THROWS_AS(laplacian(k2, z3), DimensionError);
}

TEST_CASE("laplacian columns sum to zero") {
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    const Graph g = random_graph(6, rng);
    const auto t = random_t(6, 2.0, rng);
    const SymMatrix a = laplacian(g, t);
    CHECK(a.colwise().sum().cwiseAbs().maxCoeff() <= 1e-12 * a.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("pinning diagonal examples") {
  const std::vector<double> zero{0.0, 0.0};
  Eigen::VectorXd d = pinning_diagonal(Pinning({1.0, 1.0}, 1.0), zero);
  CHECK(d[0] == 1.0);
  CHECK(d[1] == 1.0);
  const std::vector<double> t{std::log(3.0), 5.0};
  d = pinning_diagonal(Pinning({1.0, 0.0}, 2.0), t);
  CHECK(d[0] == doctest::Approx(6.0));
  CHECK(d[1] == 0.0);
  d = pinning_diagonal(Pinning({0.0, 1.0}, 0.1), zero);
  CHECK(d[0] == 0.0);
  CHECK(d[1] == doctest::Approx(0.1));
  CHECK_THROWS_AS(pinning_diagonal(Pinning({1.0, 1.0}, 1.0), std::vector<double>{0.0}), DimensionError);
}

TEST_CASE("logdet examples") {
  const std::vector<double> zero{0.0, 0.0};
  CHECK(logdet_pinned(complete_graph(2), Pinning({1.0, 1.0}, 1.0), zero) == doctest::Approx(std::log(3.0)));
  CHECK(logdet_pinned(Graph::build(1, {}), Pinning({1.0}, 0.5), std::vector<double>{0.0}) ==
        doctest::Approx(std::log(0.5)));
}

TEST_CASE("logdet matches the spanning tree sum") {
  Rng rng(11);
  for (int k = 0; k < 10; ++k) {
    const Graph g = random_graph(5, rng);
    std::vector<double> pi(5);
    for (double& p : pi) p = rng.uniform() < 0.5 ? 0.0 : rng.uniform();
    pi[0] = 1.0;
    const AugmentedGraph ag(g, Pinning(pi, 0.8));
    const auto t = random_t(5, 2.0, rng);
    const TreeLaw law(ag, t);
    CHECK(std::abs(std::expm1(logdet_pinned(ag, t) - law.log_normalizer())) <= 1e-10);
  }
}

TEST_CASE("factorization failure is reported") {
  const Graph k2 = complete_graph(2);
  const AugmentedGraph ag(k2, Pinning({1.0, 0.0}, 1e-300));
  // Pinning far below the conductance scale: positive definite in exact
  // arithmetic, singular in floating point.
  const std::vector<double> t{0.0, 0.0};
  CHECK_THROWS_AS(PinnedFactorization(ag, t), NumericalError);
}

TEST_CASE("conductance overflow is an error") {
  const Graph k2 = complete_graph(2);
  const AugmentedGraph ag(k2, Pinning({1.0, 1.0}, 1.0));
  const std::vector<double> t{400.0, 400.0};
  CHECK_THROWS_AS(logdet_pinned(ag, t), NumericalError);
  CHECK_THROWS_AS(conductance(1.0, -350.0, -351.0), NumericalError);
  CHECK(conductance(2.0, 1.0, -1.0) == doctest::Approx(2.0));
}

TEST_CASE("green entry examples") {
  const Graph k2 = complete_graph(2);
  const std::vector<double> zero{0.0, 0.0};
  CHECK(green_entry(k2, Pinning({1.0, 1.0}, 1.0), zero, 0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  for (double eps : {0.5, 0.1, 0.01}) {
    const double want = 1.0 / (eps * (eps + 2.0));
    CHECK(green_entry(k2, Pinning({1.0, 1.0}, eps), zero, 0, 1) == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK_THROWS_AS(green_entry(k2, Pinning({1.0, 1.0}, 1.0), zero, 0, 0), DimensionError);
  CHECK_THROWS_AS(green_entry(k2, Pinning({1.0, 1.0}, 1.0), zero, 0, 2), DimensionError);
}

TEST_CASE("green entry is symmetric and a scaled probability") {
  Rng rng(5);
  for (int k = 0; k < 10; ++k) {
    const Graph g = random_graph(5, rng);
    const AugmentedGraph ag(g, Pinning::uniform(5, 1.0, 0.3 + rng.uniform()));
    const auto t = random_t(5, 2.0, rng);
    for (Vertex x = 0; x < 5; ++x)
      for (Vertex y = x + 1; y < 5; ++y) {
        const double gxy = green_entry(ag, t, x, y);
        CHECK(gxy == doctest::Approx(green_entry(ag, t, y, x)).epsilon(1e-12));
        const double scaled =
            gxy * (ag.eps(x) * std::exp(t[x]) + ag.eps(y) * std::exp(t[y])) / std::exp(t[x] + t[y]);
        CHECK(scaled >= 0.0);
        CHECK(scaled <= 1.0 + 1e-12);
      }
  }
}

TEST_CASE("solve with refinement") {
  Rng rng(8);
  const Graph g = random_graph(6, rng);
  const AugmentedGraph ag(g, Pinning::uniform(6, 1.0, 0.2));
  const auto t = random_t(6, 2.0, rng);
  const PinnedFactorization f(ag, t);
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(6, -1.0, 2.0);
  const Eigen::VectorXd u = f.solve(b);
  CHECK((f.matrix() * u - b).norm() <= 1e-12 * b.norm() * f.matrix().norm());
  CHECK_THROWS_AS(f.inverse_column(6), DimensionError);
}

TEST_CASE("signed minor examples") {
  SymMatrix m(2, 2);
  m << 2, -1, -1, 2;
  CHECK(signed_minor_det(m, 0, 1) == doctest::Approx(1.0));
  CHECK(signed_minor_det(m, 0, 0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(signed_minor_det(m, 0, 2), DimensionError);
}

TEST_CASE("signed minor gives the inverse by cofactors") {
  Rng rng(21);
  const Graph g = random_graph(5, rng);
  const AugmentedGraph ag(g, Pinning::uniform(5, 1.0, 0.5));
  const auto t = random_t(5, 1.5, rng);
  const SymMatrix m = pinned_matrix(ag, t);
  const SymMatrix inv = m.inverse();
  const double det = m.determinant();
  for (Vertex x = 0; x < 5; ++x)
    for (Vertex y = 0; y < 5; ++y) CHECK(signed_minor_det(m, x, y) / det == doctest::Approx(inv(x, y)).epsilon(1e-10));
}
