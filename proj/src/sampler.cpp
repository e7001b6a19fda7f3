#include "h22/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <ostream>
#include <unsupported/Eigen/FFT>

#include "h22/error.hpp"
#include "h22/measure.hpp"

namespace h22 {

namespace {

/// Log target, with overflowing or non-positive-definite states treated as
/// zero density.
double log_target(const AugmentedGraph& ag, std::span<const double> t) {
  try {
    return log_density_t(ag, t);
  } catch (const NumericalError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

bool accept(double log_ratio, Rng& rng) {
  if (log_ratio >= 0.0) return true;
  if (!(log_ratio > -std::numeric_limits<double>::infinity())) return false;
  return rng.uniform() < std::exp(log_ratio);
}

struct ChainState {
  std::vector<double> t;
  double logp;
  double step;
  double shift_step;
};

/// One sweep; returns (accepted coordinate moves, accepted shift move).
std::pair<std::size_t, bool> sweep(const AugmentedGraph& ag, ChainState& st, Rng& rng) {
  const std::size_t n = st.t.size();
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double old = st.t[i];
    st.t[i] = old + st.step * rng.normal();
    const double lp = log_target(ag, st.t);
    if (accept(lp - st.logp, rng)) {
      st.logp = lp;
      ++accepted;
    } else {
      st.t[i] = old;
    }
  }
  bool shifted = false;
  if (n > 1) {
    const double delta = st.shift_step * rng.normal();
    for (double& v : st.t) v += delta;
    const double lp = log_target(ag, st.t);
    if (accept(lp - st.logp, rng)) {
      st.logp = lp;
      shifted = true;
    } else {
      for (double& v : st.t) v -= delta;
    }
  }
  return {accepted, shifted};
}

}  // namespace

std::vector<double> SampleBatch::t_series(Vertex i) const {
  std::vector<double> out;
  out.reserve(draws.size());
  for (const auto& d : draws) out.push_back(d.t.at(i));
  return out;
}

void validate(const McmcConfig& cfg) {
  if (!(cfg.step_size > 0.0) || !std::isfinite(cfg.step_size))
    throw ConfigError("step size must be positive");
  if (cfg.n_samples == 0) throw ConfigError("number of samples must be positive");
  if (cfg.thinning == 0) throw ConfigError("thinning must be at least 1");
}

SampleBatch run_chain(const AugmentedGraph& ag, const McmcConfig& cfg) {
  validate(cfg);
  const std::size_t n = ag.vertex_count();
  Rng rng(cfg.seed);

  ChainState st{std::vector<double>(n, 0.0), 0.0, cfg.step_size, cfg.step_size};
  st.logp = log_density_t(ag, st.t);
  if (!std::isfinite(st.logp)) throw NumericalError("log density is not finite at t = 0");

  SampleBatch batch;
  batch.config = cfg;
  batch.rng_algorithm = std::string(Rng::kAlgorithm);
  batch.burn_in_sweeps =
      cfg.burn_in * (ag.pinning().epsilon() <= kSmallEpsilon ? kSmallEpsilonBurnInFactor : 1);

  for (std::size_t k = 0; k < batch.burn_in_sweeps; ++k) {
    auto [acc, shifted] = sweep(ag, st, rng);
    if (cfg.adapt) {
      const double gain = 1.0 / std::pow(static_cast<double>(k + 1), 0.6);
      const double rate = static_cast<double>(acc) / static_cast<double>(n);
      st.step *= std::exp(gain * (rate - kTargetAcceptance));
      if (n > 1) st.shift_step *= std::exp(gain * ((shifted ? 1.0 : 0.0) - kTargetAcceptance));
    }
  }
  batch.step_size = st.step;
  batch.shift_step_size = n > 1 ? st.shift_step : 0.0;

  std::size_t accepted = 0, shifts = 0, sweeps = 0;
  batch.draws.reserve(cfg.n_samples);
  while (batch.draws.size() < cfg.n_samples) {
    for (std::size_t k = 0; k < cfg.thinning; ++k) {
      auto [acc, shifted] = sweep(ag, st, rng);
      accepted += acc;
      shifts += shifted ? 1 : 0;
      ++sweeps;
    }
    Eigen::VectorXd s = sample_s_given_t(ag, st.t, rng);
    SpanningTree tree = sample_tree_wilson(ag, st.t, rng);
    batch.draws.push_back({st.t, std::vector<double>(s.data(), s.data() + s.size()), std::move(tree)});
  }
  batch.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(sweeps * n);
  batch.shift_acceptance_rate = n > 1 ? static_cast<double>(shifts) / static_cast<double>(sweeps) : 0.0;
  if (batch.acceptance_rate < 0.01)
    throw DiagnosticError("acceptance rate " + std::to_string(batch.acceptance_rate) +
                          " below 0.01 after adaptation");

  if (batch.size() >= kMinSeriesLength)
    for (Vertex i = 0; i < n; ++i) batch.iact.push_back(integrated_autocorrelation_time(batch.t_series(i)));
  return batch;
}

double integrated_autocorrelation_time(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < kMinSeriesLength)
    throw ConfigError("autocorrelation needs at least " + std::to_string(kMinSeriesLength) + " draws");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);

  std::size_t len = 1;
  while (len < 2 * n) len <<= 1;
  std::vector<double> padded(len, 0.0);
  for (std::size_t i = 0; i < n; ++i) padded[i] = x[i] - mean;
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, padded);
  for (auto& c : spec) c = std::complex<double>(std::norm(c), 0.0);
  std::vector<double> acov;
  fft.inv(acov, spec);

  const double c0 = acov[0];
  if (!(c0 > 1e-300 * static_cast<double>(n))) return static_cast<double>(n);  // constant series
  double sum = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double rho = acov[k] / c0;
    if (rho <= 0.0) break;
    sum += rho;
  }
  return 1.0 + 2.0 * sum;
}

double effective_sample_size(std::span<const double> x) {
  return static_cast<double>(x.size()) / integrated_autocorrelation_time(x);
}

std::vector<double> effective_sample_size(const SampleBatch& batch) {
  if (batch.draws.empty()) return {};
  std::vector<double> out;
  for (Vertex i = 0; i < batch.draws.front().t.size(); ++i)
    out.push_back(effective_sample_size(batch.t_series(i)));
  return out;
}

nlohmann::json draw_to_json(const Draw& d) {
  nlohmann::json tree = nlohmann::json::array();
  for (const Edge& e : d.tree.edges())
    tree.push_back({e.u + 1, e.v == kRho ? std::size_t{0} : e.v + 1});
  return {{"t", d.t}, {"s", d.s}, {"tree", tree}};
}

nlohmann::json to_json(const McmcConfig& cfg) {
  return {{"step_size", cfg.step_size}, {"n_samples", cfg.n_samples}, {"burn_in", cfg.burn_in},
          {"thinning", cfg.thinning},   {"seed", cfg.seed},           {"adapt", cfg.adapt}};
}

void write_jsonl(std::ostream& out, const SampleBatch& batch, const nlohmann::json& header) {
  nlohmann::json h = header;
  h["rng"] = batch.rng_algorithm;
  h["mcmc"] = to_json(batch.config);
  h["acceptance_rate"] = batch.acceptance_rate;
  h["shift_acceptance_rate"] = batch.shift_acceptance_rate;
  h["iact"] = batch.iact;
  out << nlohmann::json{{"header", h}}.dump() << '\n';
  for (const auto& d : batch.draws) out << draw_to_json(d).dump() << '\n';
}

}  // namespace h22
