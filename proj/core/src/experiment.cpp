#include "nashadmm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <ostream>

#include "nashadmm/csv.hpp"
#include "nashadmm/diagnostics.hpp"
#include "nashadmm/reference.hpp"
#include "nashadmm/rng.hpp"
#include "nashadmm/sampling.hpp"

namespace nashadmm {

void ExperimentReport::add(const std::string& key, const std::string& value) { summary.emplace_back(key, value); }

std::optional<std::string> ExperimentReport::value(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void ExperimentReport::write(std::ostream& out) const {
  for (const auto& [k, v] : summary) out << k << " = " << v << '\n';
}

std::string summary_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string summary_vector(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) s += ' ';
    s += summary_real(v(i));
  }
  return s;
}

namespace {

std::string flag_names(std::uint32_t flags) {
  std::string s;
  auto add = [&](std::uint32_t bit, const char* name) {
    if ((flags & bit) == 0) return;
    if (!s.empty()) s += ',';
    s += name;
  };
  add(kConditionUnverified, "condition_unverified");
  add(kSampledConstants, "sampled_constants");
  add(kNoOracle, "no_oracle");
  return s.empty() ? "none" : s;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

struct Context {
  std::unique_ptr<GameModel> game;
  std::optional<CommGraph> graph;
  GameConstants constants;
  std::optional<AdmmParams> params;
  std::optional<TheoryConstants> theory;
  std::optional<AugmentedState> init;
  std::uint32_t flags = 0;
  double oracle_tau = 0.0;
};

Context prepare(const ExperimentConfig& config, ExperimentReport& report) {
  Context ctx;
  ctx.game = build_game(config);
  ctx.graph = build_graph(config);
  const auto n = ctx.game->n_players();
  if (ctx.graph->size() != n) {
    throw ConfigError("/graph", 0,
                      "graph has " + std::to_string(ctx.graph->size()) + " vertices but the game has " +
                          std::to_string(n) + " players");
  }
  report.add("mode", to_string(config.mode));
  report.add("game", std::string(ctx.game->kind()));
  report.add("n_players", std::to_string(n));
  report.add("seed", std::to_string(config.seed));

  std::optional<GameConstants> exact;
  if (!config.constants.sampled) exact = ctx.game->constants();
  if (exact) {
    ctx.constants = *exact;
    report.add("constants_source", "exact");
  } else {
    auto rng = Rng::stream(config.constants_seed(), StreamPurpose::kSampling);
    const auto sampler = config.constants.box ? uniform_box_sampler(n, *config.constants.box, rng)
                                              : uniform_box_sampler(*ctx.game, rng);
    const auto sampled = estimate_constants_sampled(*ctx.game, sampler, config.constants.samples);
    if (sampled.used == 0) throw ConfigError("/constants", 0, "no sample point lies in the game's domain");
    ctx.constants = sampled.constants;
    ctx.flags |= kSampledConstants;
    report.add("constants_source", "sampled");
    report.add("constants_samples_used", std::to_string(sampled.used));
    report.add("constants_samples_skipped", std::to_string(sampled.skipped));
  }
  const auto& k = ctx.constants;
  report.add("mu", summary_real(k.mu));
  report.add("theta0", summary_real(k.theta0));
  report.add("theta", summary_real(k.theta));
  report.add("lambda2", summary_real(ctx.graph->algebraic_connectivity()));
  report.add("d_star", std::to_string(ctx.graph->max_degree()));

  if (k.mu > 0.0) {
    report.add("c_min", summary_real(c_min(k.theta, k.theta0, k.mu, ctx.graph->algebraic_connectivity())));
  } else {
    report.add("c_min", "undefined");
  }

  AdmmParams params;
  params.c = config.solver.c;
  if (config.solver.c0) {
    params.c0 = *config.solver.c0;
  } else {
    if (!(k.mu > 0.0)) throw ConfigError("/solver/c0", 0, "c0 = auto needs a positive monotonicity constant");
    params.c0 = default_c0(k, *ctx.graph, config.solver.c0_factor);
  }
  if (config.solver.beta.size() == 1) {
    params.beta.assign(n, config.solver.beta.front());
  } else if (config.solver.beta.size() == n) {
    params.beta = config.solver.beta;
  } else {
    throw ConfigError("/solver/beta", 0, "expected one value or one per player");
  }
  params.validate(n);
  report.add("c", summary_real(params.c));
  report.add("c0", summary_real(params.c0));
  if (std::all_of(params.beta.begin(), params.beta.end(), [&](double b) { return b == params.beta.front(); })) {
    report.add("beta", summary_real(params.beta.front()));
  } else {
    report.add("beta", summary_vector(Eigen::Map<const Eigen::VectorXd>(params.beta.data(),
                                                                        static_cast<Eigen::Index>(n))));
  }
  if (k.mu > 0.0) {
    ctx.theory = theory_constants(k, *ctx.graph, params);
    const auto& t = *ctx.theory;
    report.add("mu_bar", summary_real(t.mu_bar));
    report.add("theta_bar", summary_real(t.theta_bar));
    report.add("beta_condition_lhs", summary_real(t.beta_condition_lhs));
    report.add("beta_condition_rhs", summary_real(t.beta_condition_rhs));
    report.add("c0_above_c_min", yes_no(t.c0_above_c_min));
    report.add("condition_satisfied", yes_no(t.condition_satisfied));
    if (!t.condition_satisfied) ctx.flags |= kConditionUnverified;
  } else {
    ctx.flags |= kConditionUnverified;
    report.add("condition_satisfied", "false");
  }
  ctx.params = params;
  InitSpec spec;
  spec.own = config.init.own;
  spec.others = config.init.others;
  spec.seed = config.init_seed();
  ctx.init = initial_state(*ctx.game, spec);
  if (config.oracle.tau) {
    ctx.oracle_tau = *config.oracle.tau;
  } else {
    if (!(k.mu > 0.0)) throw ConfigError("/oracle/tau", 0, "tau = auto needs a positive monotonicity constant");
    ctx.oracle_tau = k.mu / (k.theta0 * k.theta0);
  }
  return ctx;
}

std::string sibling_path(const std::string& path, const std::string& tag) {
  std::filesystem::path p(path);
  const auto ext = p.has_extension() ? p.extension().string() : std::string(".csv");
  return (p.parent_path() / (p.stem().string() + "-" + tag + ext)).string();
}

void summarize_run(ExperimentReport& report, const std::string& prefix, const RunResult& r, const Context& ctx) {
  const auto& last = r.trace.back();
  double max_dual = 0.0;
  for (const auto& t : r.trace) max_dual = std::max(max_dual, t.dual_sum_norm);
  const auto actions = r.final_state.actions();
  report.add(prefix + "iterations", std::to_string(r.iterations));
  report.add(prefix + "converged", yes_no(r.converged));
  report.add(prefix + "final_rel_error", summary_real(last.rel_error));
  report.add(prefix + "final_consensus_residual", summary_real(last.consensus_residual));
  report.add(prefix + "final_delta_x_norm", summary_real(last.delta_x_norm));
  report.add(prefix + "max_dual_sum_norm", summary_real(max_dual));
  try {
    report.add(prefix + "ne_residual", summary_real(ne_residual(actions, *ctx.game, ctx.oracle_tau)));
  } catch (const DomainError&) {
    report.add(prefix + "ne_residual", "undefined");
  }
  report.add(prefix + "condition_flags", flag_names(last.condition_flags));
  report.add(prefix + "actions", summary_vector(actions));
}

struct PathRecorder {
  std::vector<std::size_t> players;
  std::vector<std::pair<std::size_t, Eigen::VectorXd>> rows;

  void operator()(const AugmentedState& s) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(players.size()));
    for (std::size_t p = 0; p < players.size(); ++p) v(static_cast<Eigen::Index>(p)) = s.estimate(players[p], players[p]);
    rows.emplace_back(s.iteration, std::move(v));
  }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << 'k';
    for (auto p : players) out << ",x_" << p + 1;
    out << '\n';
    for (const auto& [k, v] : rows) {
      out << k;
      for (double x : v) out << ',' << format_real(x);
      out << '\n';
    }
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
  }
};

}  // namespace

ExperimentReport check_params(const ExperimentConfig& config) {
  ExperimentReport report;
  auto ctx = prepare(config, report);
  report.theory = ctx.theory;
  report.add("condition_flags", flag_names(ctx.flags));
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  ExperimentReport report;
  auto ctx = prepare(config, report);
  report.theory = ctx.theory;
  const auto& game = *ctx.game;
  const auto& g = *ctx.graph;
  const auto& init = *ctx.init;

  const bool oracle_required =
      config.mode == Mode::kOracle || config.mode == Mode::kCompare || config.stopping.oracle_target;
  report.add("oracle_tau", summary_real(ctx.oracle_tau));
  try {
    const auto oracle = centralized_ne(game, ctx.oracle_tau, config.oracle.tol, config.oracle.max_iter, init.actions());
    report.x_star = oracle.x;
    report.add("oracle_iterations", std::to_string(oracle.iterations));
    report.add("oracle_residual", summary_real(oracle.residual));
    report.add("oracle_step_validated", yes_no(oracle.step_validated));
    report.add("x_star", summary_vector(oracle.x));
  } catch (const std::exception& e) {
    if (oracle_required) throw;
    ctx.flags |= kNoOracle;
    report.add("oracle_status", std::string("unavailable: ") + e.what());
  }
  if (config.mode == Mode::kOracle) return report;

  StoppingRule stop;
  stop.tolerance = config.stopping.tol;
  stop.max_iterations = config.stopping.max_iter;
  if (config.stopping.oracle_target) stop.target = report.x_star;
  report.add("tol", summary_real(stop.tolerance));
  report.add("stopping", config.stopping.oracle_target ? "oracle" : "residual");

  RunOptions options;
  options.record_every = config.output.record_every;
  options.threads = config.threads;
  options.oracle = report.x_star;
  options.flags = ctx.flags;

  PathRecorder paths;
  paths.players = config.output.path_players;
  for (auto p : paths.players) {
    if (p >= game.n_players()) throw ConfigError("/output/path_players", 0, "player index out of range");
  }
  const bool want_paths = config.output.paths_csv && !paths.players.empty();

  const double gamma = config.baseline.gamma.value_or(0.9 / (static_cast<double>(g.max_degree()) + 1.0));
  auto run_baseline = [&] {
    auto bstop = stop;
    if (config.baseline.max_iter) bstop.max_iterations = *config.baseline.max_iter;
    report.add("baseline_a", summary_real(config.baseline.a));
    report.add("baseline_b", summary_real(config.baseline.b));
    report.add("baseline_gamma", summary_real(gamma));
    return baseline_consensus_gradient(game, g, StepSchedule::diminishing(config.baseline.a, config.baseline.b),
                                       gamma, init, bstop, options);
  };

  if (config.mode == Mode::kAdmm || config.mode == Mode::kBaseline) {
    if (want_paths) options.on_record = std::ref(paths);
    auto result = config.mode == Mode::kAdmm ? run(game, g, *ctx.params, init, stop, options) : run_baseline();
    summarize_run(report, "", result, ctx);
    if (config.output.csv) {
      write_trace_csv_file(*config.output.csv, result.trace);
      report.csv_files.push_back(*config.output.csv);
      report.add("csv", *config.output.csv);
    }
    if (want_paths) {
      paths.write(*config.output.paths_csv);
      report.add("paths_csv", *config.output.paths_csv);
    }
    (config.mode == Mode::kAdmm ? report.admm : report.baseline) = std::move(result);
    return report;
  }

  // compare
  auto admm = run(game, g, *ctx.params, init, stop, options);
  summarize_run(report, "admm_", admm, ctx);
  auto baseline = run_baseline();
  summarize_run(report, "baseline_", baseline, ctx);
  if (config.output.csv) {
    const auto a_path = sibling_path(*config.output.csv, "admm");
    const auto b_path = sibling_path(*config.output.csv, "baseline");
    write_trace_csv_file(a_path, admm.trace);
    write_trace_csv_file(b_path, baseline.trace);
    report.csv_files = {a_path, b_path};
    report.add("admm_csv", a_path);
    report.add("baseline_csv", b_path);
  }
  const double speedup = admm.converged && admm.iterations > 0
                             ? static_cast<double>(baseline.iterations) / static_cast<double>(admm.iterations)
                             : 0.0;
  report.add("speedup_iterations", summary_real(speedup));
  report.add("speedup_is_lower_bound", yes_no(admm.converged && !baseline.converged));
  const bool ok = admm.converged && speedup >= 10.0;
  report.add("speedup_at_least_10", yes_no(ok));
  if (!ok) report.exit_code = 2;
  report.admm = std::move(admm);
  report.baseline = std::move(baseline);
  return report;
}

ExperimentConfig example1_config(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.mode = Mode::kAdmm;
  cfg.seed = seed;
  cfg.game.kind = GameSpec::Kind::kCournotFamily;
  cfg.game.family = presets::example1_family();
  cfg.graph.preset = "fig2-ring20";
  cfg.solver.c = 1.0;
  cfg.solver.c0 = 22.6;
  cfg.solver.beta = {10.0};
  cfg.init.own = Interval{0.0, 0.5};
  cfg.init.others = Interval{0.0, 1.0};
  cfg.stopping.tol = 1e-10;
  cfg.stopping.max_iter = 200'000;
  cfg.output.record_every = 10;

  auto rng = Rng::stream(seed, StreamPurpose::kSampling, 1);
  std::vector<std::size_t> firms(20);
  std::iota(firms.begin(), firms.end(), 0);
  for (std::size_t i = 0; i < 7; ++i) std::swap(firms[i], firms[i + rng.below(20 - i)]);
  firms.resize(7);
  std::sort(firms.begin(), firms.end());
  cfg.output.path_players = firms;
  return cfg;
}

ExperimentConfig example2_config(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.mode = Mode::kCompare;
  cfg.seed = seed;
  cfg.game.kind = GameSpec::Kind::kRateControl;
  cfg.game.network = presets::example2_network();
  cfg.graph.preset = "example2-comm";
  cfg.solver.c = 1.0;
  cfg.solver.c0 = 31.0;
  cfg.solver.beta = {14.0};
  cfg.init.own = Interval{0.0, 2.0};
  cfg.init.others = Interval{0.0, 2.0};
  cfg.stopping.tol = 1e-4;
  cfg.stopping.max_iter = 500'000;
  cfg.stopping.oracle_target = true;
  cfg.output.record_every = 100;
  cfg.baseline.a = 5.0;
  cfg.baseline.b = 10.0;
  cfg.baseline.max_iter = 5'000'000;
  cfg.constants.sampled = true;
  cfg.constants.samples = 2000;
  cfg.constants.box = Interval{0.0, 4.0};
  return cfg;
}

ExperimentReport reproduce_example1(std::uint64_t seed) { return run_experiment(example1_config(seed)); }

ExperimentReport reproduce_example2(std::uint64_t seed) { return run_experiment(example2_config(seed)); }

}  // namespace nashadmm
