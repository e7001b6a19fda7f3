#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "h22/forests.hpp"
#include "h22/pinning.hpp"

namespace h22 {

struct McmcConfig {
  double step_size = 1.0;  // initial coordinate proposal scale
  std::size_t n_samples = 1000;
  std::size_t burn_in = 1000;  // sweeps; multiplied by 10 when epsilon <= 1e-3
  std::size_t thinning = 1;    // sweeps between retained draws
  std::uint64_t seed = 1;
  bool adapt = true;  // Robbins-Monro toward kTargetAcceptance during burn-in
};

inline constexpr double kTargetAcceptance = 0.35;
inline constexpr double kSmallEpsilon = 1e-3;
inline constexpr std::size_t kSmallEpsilonBurnInFactor = 10;

struct Draw {
  std::vector<double> t;
  std::vector<double> s;
  SpanningTree tree;
};

struct SampleBatch {
  std::vector<Draw> draws;
  double acceptance_rate = 0.0;        // coordinate moves, after burn-in
  double shift_acceptance_rate = 0.0;  // global shift moves, after burn-in
  double step_size = 0.0;              // frozen values used after burn-in
  double shift_step_size = 0.0;
  std::size_t burn_in_sweeps = 0;
  std::vector<double> iact;  // per t-coordinate, in units of retained draws
  McmcConfig config;
  std::string rng_algorithm;

  std::size_t size() const noexcept { return draws.size(); }
  /// Series of t_i over the batch.
  std::vector<double> t_series(Vertex i) const;
};

void validate(const McmcConfig& cfg);

/// Metropolis chain on the t-marginal. One sweep proposes a Gaussian move of
/// each coordinate in turn, then one common shift of all coordinates. Each
/// retained t is decorated with exact draws of s and T.
SampleBatch run_chain(const AugmentedGraph& ag, const McmcConfig& cfg);

/// Minimum series length accepted by the autocorrelation estimators.
inline constexpr std::size_t kMinSeriesLength = 100;

/// 1 + 2 sum_k rho_k, truncated at the first nonpositive autocorrelation.
double integrated_autocorrelation_time(std::span<const double> x);
/// n / integrated_autocorrelation_time.
double effective_sample_size(std::span<const double> x);
/// Per t-coordinate.
std::vector<double> effective_sample_size(const SampleBatch& batch);

/// One JSON object per draw: {"t":[...],"s":[...],"tree":[[i,j],...]} with
/// 1-based vertices and rho as 0. Preceded by one {"header":...} line.
void write_jsonl(std::ostream& out, const SampleBatch& batch, const nlohmann::json& header);
nlohmann::json draw_to_json(const Draw& d);

nlohmann::json to_json(const McmcConfig& cfg);

}  // namespace h22
