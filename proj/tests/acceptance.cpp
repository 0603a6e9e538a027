// Acceptance gate: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nashadmm/admm.hpp"
#include "nashadmm/csv.hpp"
#include "nashadmm/diagnostics.hpp"
#include "nashadmm/experiment.hpp"
#include "nashadmm/presets.hpp"
#include "nashadmm/reference.hpp"
#include "nashadmm/theory.hpp"
#include "support.hpp"

using namespace nashadmm;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;
std::map<int, std::string> lines;

void report(int id, bool pass, const std::string& what, const std::string& measured) {
  lines[id] = "criterion " + std::to_string(id) + ": " + (pass ? "PASS" : "FAIL") + "  " + what + " [" + measured + "]";
  if (!pass) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Worst dual-sum norm over every recorded row of every run below.
double worst_dual_sum = 0.0;
std::size_t dual_rows = 0;

void track_duals(const RunResult& r) {
  for (const auto& t : r.trace) worst_dual_sum = std::max(worst_dual_sum, t.dual_sum_norm);
  dual_rows += r.trace.size();
}

struct CournotRun {
  RunResult result;
  double error = 0.0;
  double seconds = 0.0;
  bool condition = false;
};

std::vector<CournotRun> ne_runs;

void criterion_1() {
  const double v = c_min(1.099, 1.099, 1.001, 0.102);
  report(1, v >= 22.0 && v <= 23.1, "c_min formula in [22.0, 23.1]", "c_min = " + fmt("%.4f", v));
}

void criterion_2() {
  const double l2 = presets::fig2_ring20().algebraic_connectivity();
  report(2, l2 >= 0.101 && l2 <= 0.103, "lambda2 of the 20-vertex chorded ring in [0.101, 0.103]",
         "lambda2 = " + fmt("%.6f", l2));
}

void criterion_3() {
  double worst = 0.0, slowest = 0.0;
  bool all = true;
  for (std::uint64_t s = 0; s < 25; ++s) {
    const std::size_t n = 4 + s % 17;
    const std::size_t m = 2 + s % 6;
    const auto game = support::random_cournot(n, m, 1000 + s);
    const auto g = presets::random_connected_graph(n, n / 2, 2000 + s);
    const auto k = cournot_constants(game);
    const auto params = AdmmParams::uniform(1.0, default_c0(k, g), 10.0, n);
    const auto x_star = centralized_ne_auto(game, 1e-14).x;
    StoppingRule stop;
    stop.tolerance = 1e-11;
    stop.max_iterations = 3'000'000;
    RunOptions opts;
    opts.oracle = x_star;
    const auto t0 = Clock::now();
    auto r = run(game, g, params, initial_state(game, InitSpec{Interval{0, 1}, {0, 1}, 3000 + s}), stop, opts);
    CournotRun cr;
    cr.seconds = seconds_since(t0);
    cr.error = (r.final_state.actions() - x_star).lpNorm<Eigen::Infinity>();
    cr.condition = theory_constants(k, g, params).condition_satisfied;
    track_duals(r);
    all = all && r.converged && cr.error < 1e-5 && cr.seconds <= 60.0;
    worst = std::max(worst, cr.error);
    slowest = std::max(slowest, cr.seconds);
    cr.result = std::move(r);
    ne_runs.push_back(std::move(cr));
  }
  report(3, all, "ADMM matches the centralized oracle on 25 seeded Cournot games within 1e-5, each <= 60 s",
         "max error " + fmt("%.2e", worst) + ", slowest run " + fmt("%.2f", slowest) + " s");
}

void criterion_5() {
  auto rng = Rng::stream(5, StreamPurpose::kProbe, 55);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.below(7);
    const auto game = support::random_cournot(n, 1 + rng.below(4), 5000 + t);
    const auto g = presets::random_connected_graph(n, rng.below(2 * n), 6000 + t);
    AdmmParams p{rng.uniform(0.1, 3), rng.uniform(0.1, 30), {}};
    for (std::size_t i = 0; i < n; ++i) p.beta.push_back(rng.uniform(0.1, 10));
    auto s = AugmentedState::zeros(n);
    s.x = support::uniform_vector(rng, static_cast<Eigen::Index>(n * n), -3, 3);
    for (std::size_t i = 0; i < n; ++i) s.estimate(i, i) = game.action_interval(i).clamp(s.estimate(i, i));
    Eigen::VectorXd w = support::uniform_vector(rng, static_cast<Eigen::Index>(n * n), -1, 1);
    s.w = w;
    const auto a = step(s, game, g, p);
    const auto b = step_vectorized(s, game, g, p);
    worst = std::max({worst, (a.x - b.x).lpNorm<Eigen::Infinity>(), (a.w - b.w).lpNorm<Eigen::Infinity>()});
  }
  report(5, worst < 1e-12, "per-agent and stacked steps agree within 1e-12 on 100 random states (N <= 8)",
         "max difference " + fmt("%.2e", worst));
}

void criterion_6() {
  double worst = 1e300;
  std::size_t violations = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const std::size_t n = 2 + s;
    const auto game = support::random_cournot(n, 1 + s % 4, 7000 + s);
    const auto g = presets::random_connected_graph(n, s % 3, 7100 + s);
    const auto k = cournot_constants(game);
    const double c0 = 2.0 * c_min(k.theta, k.theta0, k.mu, g.algebraic_connectivity());
    const auto probe = restricted_monotonicity_probe(game, g, c0, 1000, 7200 + s);
    worst = std::min(worst, probe.min_margin);
    violations += probe.violations;
  }
  report(6, worst >= -1e-9 && violations == 0,
         "restricted monotonicity margin >= -1e-9 on 10 games with c0 = 2 c_min, 1000 samples each",
         "min margin " + fmt("%.3e", worst) + ", violations " + std::to_string(violations));
}

void criterion_7() {
  std::size_t runs = 0;
  bool all = true;
  auto check = [&](const RunResult& r) {
    ++runs;
    const auto series = lyapunov_difference_series(r.trace);
    all = all && is_non_increasing(series, 1e-12);
  };
  for (const auto& cr : ne_runs) {
    if (cr.condition) check(cr.result);
  }
  const std::size_t from_ne_runs = runs;

  for (std::uint64_t s = 0; s < 8; ++s) {
    const std::size_t n = 2 + s;
    const auto game = s == 0 ? support::two_firm() : support::random_cournot(n, 1 + s % 3, 8000 + s);
    const auto g = s == 0 ? support::k2() : presets::random_connected_graph(n, s % 2, 8100 + s);
    const auto k = cournot_constants(game);
    const double c = 1.0;
    const double c0 = 2.0 * c_min(k.theta, k.theta0, k.mu, g.algebraic_connectivity());
    const double mb = mu_bar(k.mu, k.theta, k.theta0, n, g.algebraic_connectivity(), c0);
    const double tb = theta_bar(k.theta, c0, g.max_degree());
    const auto params = AdmmParams::uniform(c, c0, beta_for_condition(g, c, c0, tb, mb), n);
    const auto tc = theory_constants(k, g, params);
    if (!(tc.condition_satisfied && tc.mu_bar > 0)) {
      all = false;
      continue;
    }
    StoppingRule stop;
    stop.tolerance = 1e-12;
    stop.max_iterations = 20'000;
    auto r = run(game, g, params, initial_state(game, InitSpec{Interval{0, 1}, {0, 2}, 8200 + s}), stop);
    track_duals(r);
    check(r);
  }
  report(7, all && runs >= 8, "Lyapunov difference non-increasing (slack 1e-12) on every run satisfying the beta condition",
         std::to_string(runs) + " runs (" + std::to_string(from_ne_runs) + " from criterion 3)");
}

void criterion_8() {
  bool all = true;
  std::size_t counted = 0;
  double worst_ratio = 0.0;
  for (const auto& cr : ne_runs) {
    if (!cr.result.converged) continue;
    ++counted;
    const auto q = quartile_maxima(cr.result.trace, consensus_rate_product);
    all = all && q.last < q.first;
    if (q.first > 0) worst_ratio = std::max(worst_ratio, q.last / q.first);
  }
  report(8, all && counted == ne_runs.size() && counted > 0,
         "k * consensus_residual: last-quartile max < first-quartile max on converged criterion-3 runs",
         std::to_string(counted) + " runs, worst last/first " + fmt("%.2e", worst_ratio));
}

void criterion_9() {
  auto rng = Rng::stream(9, StreamPurpose::kProbe, 99);
  double worst = 0.0;
  auto fd_check = [&](const GameModel& game, const Eigen::VectorXd& y0) {
    for (std::size_t i = 0; i < game.n_players(); ++i) {
      Eigen::VectorXd y = y0;
      const double g = game.partial_gradient(i, {y.data(), game.n_players()});
      const auto at = [&](double v) {
        y(static_cast<Eigen::Index>(i)) = v;
        return game.cost(i, {y.data(), game.n_players()});
      };
      const double fd = oracle::central_difference(at, y0(static_cast<Eigen::Index>(i)), 1e-5);
      worst = std::max(worst, std::abs(g - fd) / std::max(std::abs(g), 1.0));
    }
  };
  const auto cournot = presets::generate_cournot(presets::example1_family(), 3);
  for (int p = 0; p < 50; ++p) {
    Eigen::VectorXd y(20);
    for (std::size_t i = 0; i < 20; ++i) {
      const auto iv = cournot.action_interval(i);
      const double pad = 0.01 * (iv.hi - iv.lo);
      y(static_cast<Eigen::Index>(i)) = rng.uniform(iv.lo + pad, iv.hi - pad);
    }
    fd_check(cournot, y);
  }
  const RateControlGame rate(presets::example2_network());
  for (int p = 0; p < 50; ++p) fd_check(rate, support::uniform_vector(rng, 15, 0.05, 4.5));
  report(9, worst < 1e-6, "analytic gradients match central differences at 50 interior points per game",
         "max relative error " + fmt("%.2e", worst));
}

void criterion_10() {
  const auto t0 = Clock::now();
  const auto rep = reproduce_example2(0);
  const double secs = seconds_since(t0);
  track_duals(*rep.admm);
  const auto a = rep.admm->iterations;
  const auto b = rep.baseline->iterations;
  const bool ok = rep.admm->converged && 10 * a <= b && secs <= 300.0;
  report(10, ok, "rate-control preset at tol 1e-4: ADMM iterations <= 1/10 of the diminishing-step baseline",
         "ADMM " + std::to_string(a) + ", baseline " + std::to_string(b) +
             (rep.baseline->converged ? "" : " (cap reached, ratio is a lower bound)") + ", ratio " +
             fmt("%.1f", static_cast<double>(b) / static_cast<double>(a)) + ", " + fmt("%.1f", secs) + " s");
}

void criterion_4() {
  report(4, worst_dual_sum < 1e-10 && dual_rows > 0, "dual-sum norm < 1e-10 on every recorded iteration of every run",
         std::to_string(dual_rows) + " rows, max " + fmt("%.2e", worst_dual_sum));
}

void criterion_11() {
  const auto dir = std::filesystem::temp_directory_path() / "nashadmm-acceptance";
  std::filesystem::create_directories(dir);
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  bool all = true;
  std::size_t compared = 0;
  auto check = [&](ExperimentConfig cfg, const std::string& tag) {
    std::vector<std::string> bytes;
    for (std::size_t threads : {1u, 1u, 4u, 4u}) {
      cfg.threads = threads;
      cfg.output.csv = (dir / (tag + "-" + std::to_string(bytes.size()) + ".csv")).string();
      cfg.output.paths_csv.reset();
      (void)run_experiment(cfg);
      bytes.push_back(slurp(*cfg.output.csv));
    }
    for (const auto& b : bytes) all = all && !b.empty() && b == bytes[0];
    ++compared;
  };
  auto e1 = example1_config(42);
  e1.stopping.max_iter = 20'000;
  check(e1, "cournot");
  auto e2 = example2_config(42);
  e2.mode = Mode::kAdmm;
  e2.stopping.max_iter = 20'000;
  check(e2, "rate");
  report(11, all, "identical config and seed give byte-identical CSV over two runs and threads 1 and 4",
         std::to_string(compared) + " configs x 4 runs");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_4();
  criterion_11();
  for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
