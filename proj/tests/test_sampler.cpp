#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "h22/error.hpp"
#include "h22/experiments.hpp"
#include "h22/observables.hpp"
#include "h22/sampler.hpp"

using namespace h22;

namespace {

const Graph kSingle = Graph::build(1, {});

McmcConfig config(std::size_t samples, std::uint64_t seed, std::size_t thinning = 1) {
  McmcConfig cfg;
  cfg.n_samples = samples;
  cfg.burn_in = 1000;
  cfg.thinning = thinning;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("ESS of white noise is about n") {
  Rng rng(3);
  std::vector<double> x(20000);
  for (double& v : x) v = rng.normal();
  CHECK(effective_sample_size(x) == doctest::Approx(20000.0).epsilon(0.1));
}

TEST_CASE("ESS of a constant chain is tiny") {
  const std::vector<double> x(500, 2.5);
  CHECK(effective_sample_size(x) <= 2.0);
}

TEST_CASE("ESS of AR(1) with rho 0.5 is n/3") {
  Rng rng(4);
  const std::size_t n = 100000;
  std::vector<double> x(n);
  double v = 0.0;
  for (double& xi : x) {
    v = 0.5 * v + std::sqrt(0.75) * rng.normal();
    xi = v;
  }
  CHECK(effective_sample_size(x) == doctest::Approx(n / 3.0).epsilon(0.2));
}

TEST_CASE("ESS needs a minimum length") {
  const std::vector<double> x(kMinSeriesLength - 1, 0.0);
  CHECK_THROWS_AS(effective_sample_size(x), ConfigError);
}

TEST_CASE("config validation") {
  McmcConfig cfg;
  cfg.n_samples = 0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = McmcConfig{};
  cfg.thinning = 0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = McmcConfig{};
  cfg.step_size = -1.0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("fixed seed gives identical batches") {
  const AugmentedGraph ag(cycle_graph(4), Pinning::uniform(4, 1.0, 0.3));
  const SampleBatch a = run_chain(ag, config(300, 5));
  const SampleBatch b = run_chain(ag, config(300, 5));
  const SampleBatch c = run_chain(ag, config(300, 6));
  REQUIRE(a.size() == b.size());
  bool differs = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a.draws[k].t == b.draws[k].t);
    CHECK(a.draws[k].s == b.draws[k].s);
    CHECK(a.draws[k].tree == b.draws[k].tree);
    differs = differs || a.draws[k].t != c.draws[k].t;
  }
  CHECK(differs);
  CHECK(a.acceptance_rate == b.acceptance_rate);
}

TEST_CASE("small epsilon lengthens burn-in") {
  const AugmentedGraph ag(complete_graph(2), Pinning::uniform(2, 1.0, 1e-3));
  McmcConfig cfg = config(100, 1);
  cfg.burn_in = 50;
  CHECK(run_chain(ag, cfg).burn_in_sweeps == 500);
  const AugmentedGraph larger(complete_graph(2), Pinning::uniform(2, 1.0, 2e-3));
  CHECK(run_chain(larger, cfg).burn_in_sweeps == 50);
}

TEST_CASE("adaptation reaches a reasonable acceptance rate") {
  const AugmentedGraph ag(path_graph(3), Pinning::uniform(3, 1.0, 0.5));
  const SampleBatch b = run_chain(ag, config(5000, 2));
  CHECK(b.acceptance_rate > 0.2);
  CHECK(b.acceptance_rate < 0.5);
  CHECK(b.iact.size() == 3);
}

TEST_CASE("hopeless proposals raise a diagnostic") {
  const AugmentedGraph ag(kSingle, Pinning({1.0}, 1.0));
  McmcConfig cfg = config(200, 1);
  cfg.adapt = false;
  cfg.step_size = 1e4;
  CHECK_THROWS_AS(run_chain(ag, cfg), DiagnosticError);
}

TEST_CASE("Ward identity on one and two sites") {
  const AugmentedGraph one(kSingle, Pinning({1.0}, 1.0));
  const Estimate w1 = estimate_ward(run_chain(one, config(50000, 10)), 0);
  CHECK(std::abs(w1.mean - 1.0) <= 3.0 * w1.std_error);

  const AugmentedGraph two(complete_graph(2), Pinning({1.0, 1.0}, 1.0));
  const Estimate w2 = estimate_ward(run_chain(two, config(50000, 11)), 1);
  CHECK(std::abs(w2.mean - 1.0) <= 3.0 * w2.std_error);
}

TEST_CASE("single-site chain reproduces the exact t marginal") {
  const AugmentedGraph ag(kSingle, Pinning({1.0}, 1.0));
  const SampleBatch b = run_chain(ag, config(150000, 21, 4));
  const auto ess = effective_sample_size(b);
  CHECK(ess[0] >= 1e5);
  const auto ks = stats::ks_test(b.t_series(0), single_site_t_cdf(1.0));
  CHECK(ks.p_value > 1e-3);
}

TEST_CASE("JSON lines output") {
  const AugmentedGraph ag(complete_graph(2), Pinning({1.0, 0.0}, 1.0));
  const SampleBatch b = run_chain(ag, config(3, 1));
  std::ostringstream out;
  write_jsonl(out, b, {{"graph", "K2"}});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  const auto header = nlohmann::json::parse(line);
  CHECK(header["header"]["graph"] == "K2");
  CHECK(header["header"]["rng"] == std::string(Rng::kAlgorithm));
  CHECK(header["header"]["mcmc"]["n_samples"] == 3);
  int records = 0;
  while (std::getline(in, line)) {
    const auto rec = nlohmann::json::parse(line);
    CHECK(rec["t"].size() == 2);
    CHECK(rec["s"].size() == 2);
    REQUIRE(rec["tree"].size() == 2);
    // Only vertex 1 is pinned, so the tree is {1~2, 1~rho} with rho written as 0.
    CHECK(rec["tree"][0] == nlohmann::json::array({1, 2}));
    CHECK(rec["tree"][1] == nlohmann::json::array({1, 0}));
    ++records;
  }
  CHECK(records == 3);
}
