// Command-line driver: verify, sample, compare-pinning, ladder-decay, independence.
//
// Exit codes: 0 success, 1 scientific check failed, 2 usage or configuration
// error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "h22/error.hpp"
#include "h22/experiments.hpp"
#include "h22/oracle.hpp"
#include "h22/version.hpp"

namespace {

using nlohmann::json;
using namespace h22;

constexpr int kOk = 0;
constexpr int kScientific = 1;
constexpr int kUsage = 2;
constexpr int kNumerical = 3;

struct RunOptions {
  std::string command;
  std::string graph_file;
  std::string ladder_base;
  std::vector<int> ladder_levels{0, 0};
  std::optional<double> beta_vertical;
  std::optional<double> beta_horizontal;
  std::vector<std::string> pi{"1"};  // one value, delta:X, or one entry per vertex
  std::vector<double> eps;
  std::vector<std::string> pairs;  // flattened X1,Y1,X2,Y2,...
  std::size_t samples = 10000;
  std::size_t burn_in = 2000;
  std::size_t thin = 1;
  std::uint64_t seed = 1;
  double step = 1.0;
  std::string out = ".";
  std::size_t max_vertices = 7;
};

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("cannot parse " + what + " '" + s + "'");
  }
}

long long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("cannot parse " + what + " '" + s + "'");
  }
}

Vertex parse_label(const std::string& s, std::size_t n) {
  const long long v = parse_int(s, "vertex label");
  if (v < 1 || static_cast<std::size_t>(v) > n)
    throw ConfigError("vertex label " + s + " out of range 1.." + std::to_string(n));
  return static_cast<Vertex>(v - 1);
}

/// Label X of a "delta:X" pinning spec, if that is the form given.
std::optional<Vertex> delta_vertex(const std::vector<std::string>& spec, std::size_t n) {
  if (spec.size() != 1 || spec[0].rfind("delta:", 0) != 0) return std::nullopt;
  return parse_label(spec[0].substr(6), n);
}

std::vector<double> parse_pi(const std::vector<std::string>& spec, std::size_t n) {
  if (const auto x = delta_vertex(spec, n)) {
    std::vector<double> pi(n, 0.0);
    pi[*x] = 1.0;
    return pi;
  }
  std::vector<double> values;
  for (const auto& v : spec) values.push_back(parse_double(v, "pinning profile"));
  if (values.size() == 1) return std::vector<double>(n, values[0]);
  if (values.size() != n)
    throw ConfigError("pinning profile has " + std::to_string(values.size()) + " entries for " +
                      std::to_string(n) + " vertices");
  return values;
}

std::vector<std::pair<Vertex, Vertex>> parse_pairs(const std::vector<std::string>& labels, std::size_t n) {
  if (labels.size() % 2 != 0) throw ConfigError("pairs must be given as X,Y");
  std::vector<std::pair<Vertex, Vertex>> out;
  for (std::size_t k = 0; k < labels.size(); k += 2)
    out.emplace_back(parse_label(labels[k], n), parse_label(labels[k + 1], n));
  return out;
}

LadderSpec ladder_spec(const RunOptions& o) {
  if (o.ladder_levels.size() != 2) throw ConfigError("--ladder-L must be MINUS,PLUS");
  LadderSpec spec{read_graph_file(o.ladder_base), o.ladder_levels[0], o.ladder_levels[1], {}, {}};
  if (o.beta_vertical) spec.vertical_weights.assign(spec.base.edge_count(), *o.beta_vertical);
  if (o.beta_horizontal) spec.horizontal_weights = {*o.beta_horizontal};
  return spec;
}

Graph load_graph(const RunOptions& o) {
  if (!o.graph_file.empty() && !o.ladder_base.empty())
    throw ConfigError("give either --graph or --ladder-base, not both");
  if (!o.graph_file.empty()) return read_graph_file(o.graph_file);
  if (!o.ladder_base.empty()) return build_ladder(ladder_spec(o));
  throw ConfigError("a graph is required: --graph FILE or --ladder-base FILE");
}

McmcConfig mcmc_config(const RunOptions& o) {
  McmcConfig cfg;
  cfg.step_size = o.step;
  cfg.n_samples = o.samples;
  cfg.burn_in = o.burn_in;
  cfg.thinning = o.thin;
  cfg.seed = o.seed;
  validate(cfg);
  return cfg;
}

json header(const RunOptions& o) {
  json cfg{{"graph", o.graph_file},
           {"ladder_base", o.ladder_base},
           {"ladder_L", o.ladder_levels},
           {"beta_vertical", o.beta_vertical ? json(*o.beta_vertical) : json(nullptr)},
           {"beta_horizontal", o.beta_horizontal ? json(*o.beta_horizontal) : json(nullptr)},
           {"pi", o.pi},
           {"eps", o.eps},
           {"pairs", o.pairs},
           {"samples", o.samples},
           {"burn_in", o.burn_in},
           {"thin", o.thin},
           {"seed", o.seed},
           {"step", o.step},
           {"max_vertices", o.max_vertices}};
  return {{"tool", "h22"}, {"version", kVersion}, {"command", o.command}, {"config", cfg}};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::filesystem::path output_path(const RunOptions& o, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) throw ConfigError("cannot create output directory " + o.out);
  return std::filesystem::path(o.out) / name;
}

std::ofstream open_output(const RunOptions& o, const std::string& name) {
  const auto path = output_path(o, name);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  return f;
}

void write_json(const RunOptions& o, const std::string& name, json body) {
  json doc{{"header", header(o)}};
  doc.update(body);
  open_output(o, name) << doc.dump(2) << '\n';
}

/// CSV with the header block as '#' comment lines.
std::ofstream open_csv(const RunOptions& o, const std::string& name) {
  std::ofstream f = open_output(o, name);
  f << "# " << header(o).dump() << '\n';
  return f;
}

int cmd_verify(const RunOptions& o) {
  std::vector<oracle::NamedGraph> corpus = oracle::bundled_corpus();
  if (!o.graph_file.empty()) corpus.push_back({o.graph_file, read_graph_file(o.graph_file)});
  oracle::SuiteOptions opts;
  opts.max_vertices = o.max_vertices;
  opts.seed = o.seed;
  const auto records = oracle::run_suite(corpus, opts);
  json list = json::array();
  std::size_t failed = 0;
  for (const auto& r : records) {
    list.push_back(oracle::to_json(r));
    if (!r.pass) ++failed;
  }
  write_json(o, "verify.json", {{"summary", {{"checks", records.size()}, {"failed", failed}}}, {"records", list}});
  std::cout << "verify: " << records.size() << " checks, " << failed << " failed\n";
  return failed == 0 ? kOk : kScientific;
}

double single_epsilon(const RunOptions& o, double fallback) {
  if (o.eps.empty()) return fallback;
  if (o.eps.size() != 1) throw ConfigError("this command takes a single epsilon");
  return o.eps[0];
}

int cmd_sample(const RunOptions& o) {
  const Graph g = load_graph(o);
  const AugmentedGraph ag(g, Pinning(parse_pi(o.pi, g.vertex_count()), single_epsilon(o, 1.0)));
  const SampleBatch batch = run_chain(ag, mcmc_config(o));
  std::ofstream f = open_output(o, "samples.jsonl");
  write_jsonl(f, batch, header(o));
  std::cout << "sample: " << batch.size() << " draws, acceptance " << num(batch.acceptance_rate) << '\n';
  return kOk;
}

int cmd_compare(const RunOptions& o) {
  const Graph g = load_graph(o);
  const std::size_t n = g.vertex_count();
  const auto given = parse_pairs(o.pairs, n);
  if (given.size() > 1) throw ConfigError("compare-pinning takes one --pair");
  const auto [x, y] = given.empty() ? std::pair<Vertex, Vertex>{0, 1} : given[0];
  const std::vector<double> pi = parse_pi(o.pi, n);
  const std::vector<double> eps = o.eps.empty() ? kDefaultEpsSweep : o.eps;
  const SweepResult r = compare_pinning_sweep(g, pi, x, y, eps, mcmc_config(o));

  std::ofstream csv = open_csv(o, "compare_pinning.csv");
  csv << "epsilon,eps_green_mean,eps_green_se,singlepin_x_mean,singlepin_x_se,singlepin_y_mean,singlepin_y_se,"
         "one_root_mean,one_root_se,multi_root_mean,multi_root_se,ess_min\n";
  json rows = json::array();
  std::vector<Estimate> green, multi;
  for (const auto& row : r.rows) {
    csv << num(row.epsilon) << ',' << num(row.eps_green.mean) << ',' << num(row.eps_green.std_error) << ','
        << num(row.singlepin_x.mean) << ',' << num(row.singlepin_x.std_error) << ',' << num(row.singlepin_y.mean)
        << ',' << num(row.singlepin_y.std_error) << ',' << num(row.one_root.mean) << ','
        << num(row.one_root.std_error) << ',' << num(row.multi_root.mean) << ',' << num(row.multi_root.std_error)
        << ',' << num(row.ess_min) << '\n';
    rows.push_back({{"epsilon", row.epsilon},
                    {"eps_green", to_json(row.eps_green)},
                    {"eps_green_indicator", to_json(row.eps_green_indicator)},
                    {"identity_consistent", row.identity_consistent},
                    {"singlepin_x", to_json(row.singlepin_x)},
                    {"singlepin_y", to_json(row.singlepin_y)},
                    {"one_root", to_json(row.one_root)},
                    {"multi_root", to_json(row.multi_root)},
                    {"ess_min", row.ess_min}});
    green.push_back(row.eps_green);
    multi.push_back(row.multi_root);
  }

  const SweepRow& last = r.rows.back();
  const double bound = last.singlepin_x.mean + last.singlepin_y.mean;
  const double combined = std::sqrt(last.eps_green.std_error * last.eps_green.std_error +
                                    last.singlepin_x.std_error * last.singlepin_x.std_error +
                                    last.singlepin_y.std_error * last.singlepin_y.std_error);
  const bool comparison_holds = last.eps_green.mean <= bound + 3.0 * combined;
  const LimitEstimate limit = limit_of(eps, green);
  const PowerFit power = fit_power(eps, multi);
  const TrendReport trend = one_root_monotonicity(r);
  json trend_json = json::array();
  for (std::size_t k = 0; k < trend.eps.size(); ++k)
    trend_json.push_back({{"epsilon", trend.eps[k]}, {"m", to_json(trend.m[k])}});

  write_json(o, "compare_pinning.json",
             {{"pair", {x + 1, y + 1}},
              {"pi", pi},
              {"rows", rows},
              {"comparison", {{"epsilon", last.epsilon}, {"lhs", last.eps_green.mean}, {"rhs", bound},
                              {"combined_se", combined}, {"holds", comparison_holds}}},
              {"eps_green_limit", {{"smallest", to_json(limit.smallest)},
                                   {"extrapolated", to_json(limit.extrapolated)}}},
              {"multi_root_power", {{"power", power.power}, {"power_se", power.power_se},
                                    {"points", power.points}, {"identically_zero", power.identically_zero}}},
              {"one_root_trend", {{"monotone", trend.monotone}, {"values", trend_json}}}});
  std::cout << "compare-pinning: comparison at epsilon " << num(last.epsilon) << ' '
            << (comparison_holds ? "holds" : "FAILS") << '\n';
  return comparison_holds ? kOk : kScientific;
}

int cmd_ladder(const RunOptions& o) {
  if (o.ladder_base.empty()) throw ConfigError("ladder-decay requires --ladder-base");
  if (!o.graph_file.empty()) throw ConfigError("ladder-decay does not take --graph");
  const LadderSpec spec = ladder_spec(o);
  const Graph g = build_ladder(spec);
  const std::size_t n = g.vertex_count();
  const std::size_t width = spec.base.vertex_count();
  std::vector<std::pair<Vertex, Vertex>> pairs = parse_pairs(o.pairs, n);
  if (pairs.empty()) {
    // Base vertex 1 at level 0 against base vertex 1 at every other level.
    const Vertex origin = static_cast<Vertex>(spec.levels_below) * width;
    for (Vertex v = 0; v < n; v += width)
      if (v != origin) pairs.push_back({origin, v});
  }
  const double epsilon = single_epsilon(o, 0.01);
  const DecayFit fit = ladder_decay(spec, parse_pi(o.pi, n), epsilon, pairs, mcmc_config(o));

  std::ofstream csv = open_csv(o, "ladder_decay.csv");
  csv << "x,y,distance,eps_green_mean,eps_green_se,n_effective,c3,used\n";
  auto row = [&](const DecayPoint& p, bool used) {
    csv << p.x + 1 << ',' << p.y + 1 << ',' << p.distance << ',' << num(p.estimate.mean) << ','
        << num(p.estimate.std_error) << ',' << num(p.estimate.n_effective) << ',' << num(p.c3) << ','
        << (used ? 1 : 0) << '\n';
  };
  for (const auto& p : fit.points) row(p, true);
  for (const auto& p : fit.excluded) row(p, false);

  const bool decays = fit.ci_high < 0.0;
  write_json(o, "ladder_decay.json",
             {{"epsilon", epsilon},
              {"slope", fit.slope},
              {"slope_se", fit.slope_se},
              {"slope_ci99", {fit.ci_low, fit.ci_high}},
              {"intercept", fit.intercept},
              {"intercept_se", fit.intercept_se},
              {"chi2", fit.chi2},
              {"dof", fit.dof},
              {"points_used", fit.points.size()},
              {"warnings", fit.warnings},
              {"decays", decays}});
  for (const auto& w : fit.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "ladder-decay: slope " << num(fit.slope) << " 99% CI [" << num(fit.ci_low) << ", "
            << num(fit.ci_high) << "]\n";
  return decays ? kOk : kScientific;
}

int cmd_independence(const RunOptions& o) {
  const Graph g = load_graph(o);
  const std::size_t n = g.vertex_count();
  const auto x_opt = delta_vertex(o.pi, n);
  if (!x_opt) throw ConfigError("independence requires --pi delta:X");
  const Vertex x = *x_opt;
  const double eps_x = single_epsilon(o, 0.5);
  const IndependenceReport rep = independence_test(g, x, eps_x, mcmc_config(o));
  constexpr double kAlpha = 1e-3;
  auto tests = [](const std::vector<NamedTest>& list) {
    json out = json::array();
    for (const auto& t : list)
      out.push_back({{"name", t.name}, {"statistic", t.result.statistic}, {"p_value", t.result.p_value}});
    return out;
  };
  const bool pass = rep.passes(kAlpha);
  write_json(o, "independence.json",
             {{"x", x + 1},
              {"eps_x", rep.eps_x},
              {"stride", rep.stride},
              {"n_used", rep.n_used},
              {"alpha", kAlpha},
              {"correlations", tests(rep.correlations)},
              {"ks_tx", {{"statistic", rep.ks_tx.statistic}, {"p_value", rep.ks_tx.p_value}}},
              {"gradient_ks", tests(rep.gradient_ks)},
              {"ward", to_json(rep.ward)},
              {"pass", pass}});
  std::cout << "independence: " << (pass ? "pass" : "FAIL") << '\n';
  return pass ? kOk : kScientific;
}

void add_shared(CLI::App& app, RunOptions& o) {
  app.add_option("--graph", o.graph_file, "Graph file: 'n m' then m lines 'i j beta' (1-based)");
  app.add_option("--ladder-base", o.ladder_base, "Base graph file for a ladder");
  app.add_option("--ladder-L", o.ladder_levels, "Ladder extents MINUS,PLUS")->delimiter(',')->expected(2);
  app.add_option("--beta-vertical", o.beta_vertical, "Weight of every within-level edge");
  app.add_option("--beta-horizontal", o.beta_horizontal, "Weight of every between-level edge");
  app.add_option("--pi", o.pi, "Pinning profile: uniform value, delta:X, or comma list")->delimiter(',');
  app.add_option("--eps", o.eps, "Pinning strength(s), comma separated")->delimiter(',');
  app.add_option("--pair", o.pairs, "Observable pair X,Y (repeatable)")->delimiter(',');
  app.add_option("--samples", o.samples, "Retained draws per chain");
  app.add_option("--burn-in", o.burn_in, "Burn-in sweeps");
  app.add_option("--thin", o.thin, "Sweeps between retained draws");
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--step", o.step, "Initial proposal scale");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--max-vertices", o.max_vertices, "verify: largest graph checked");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rooted spanning forest sampler for the H^{2|2} model"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "key = value file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();
  RunOptions opts;
  add_shared(app, opts);
  for (const char* name : {"verify", "sample", "compare-pinning", "ladder-decay", "independence"})
    app.add_subcommand(name)->callback([&opts, name] { opts.command = name; });
  app.get_subcommand("verify")->description("Exact identity checks on small graphs");
  app.get_subcommand("sample")->description("Write a batch of draws as JSON lines");
  app.get_subcommand("compare-pinning")->description("General versus single-point pinning sweep");
  app.get_subcommand("ladder-decay")->description("Decay of epsilon E[G] along a ladder");
  app.get_subcommand("independence")->description("Independence test under single-point pinning");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (opts.command == "verify") return cmd_verify(opts);
    if (opts.command == "sample") return cmd_sample(opts);
    if (opts.command == "compare-pinning") return cmd_compare(opts);
    if (opts.command == "ladder-decay") return cmd_ladder(opts);
    return cmd_independence(opts);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const DiagnosticError& e) {
    std::cerr << "sampler diagnostic: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
