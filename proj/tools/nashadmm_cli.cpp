#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nashadmm/config.hpp"
#include "nashadmm/experiment.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
  std::optional<std::size_t> record_every;
  std::optional<std::size_t> threads;

  void attach(CLI::App& app) {
    app.add_option("--seed", seed, "Master seed (64-bit unsigned)");
    app.add_option("--out", out, "CSV trace path");
    app.add_option("--tol", tol, "Stopping tolerance")->check(CLI::PositiveNumber);
    app.add_option("--max-iter", max_iter, "Iteration cap");
    app.add_option("--record-every", record_every, "Record every N-th iteration")->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "Agent-parallel worker threads")->check(CLI::PositiveNumber);
  }

  void apply(nashadmm::ExperimentConfig& cfg) const {
    if (seed) cfg.seed = *seed;
    if (out) {
      cfg.output.csv = *out;
      if (!cfg.output.path_players.empty()) {
        std::filesystem::path p(*out);
        cfg.output.paths_csv = (p.parent_path() / (p.stem().string() + "-paths.csv")).string();
      }
    }
    if (tol) cfg.stopping.tol = *tol;
    if (max_iter) cfg.stopping.max_iter = *max_iter;
    if (record_every) cfg.output.record_every = *record_every;
    if (threads) cfg.threads = *threads;
  }
};

int emit(const nashadmm::ExperimentReport& report) {
  report.write(std::cout);
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed Nash equilibrium seeking with inexact ADMM"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides run_o, cmp_o, chk_o, ex1_o, ex2_o;

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  run_o.attach(*run);

  auto* compare = app.add_subcommand("compare", "Run ADMM and the diminishing-step baseline on a config");
  compare->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  cmp_o.attach(*compare);

  auto* check = app.add_subcommand("check-params", "Report constants and parameter conditions");
  check->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  chk_o.attach(*check);

  auto* ex1 = app.add_subcommand("example1", "Networked Cournot reproduction (20 firms, 7 markets)");
  ex1_o.attach(*ex1);

  auto* ex2 = app.add_subcommand("example2", "Rate-control reproduction (15 users, 16 links)");
  ex2_o.attach(*ex2);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run || *compare || *check) {
      auto cfg = nashadmm::load_config(config_path);
      if (*run) {
        run_o.apply(cfg);
        return emit(nashadmm::run_experiment(cfg));
      }
      if (*compare) {
        cmp_o.apply(cfg);
        cfg.mode = nashadmm::Mode::kCompare;
        return emit(nashadmm::run_experiment(cfg));
      }
      chk_o.apply(cfg);
      return emit(nashadmm::check_params(cfg));
    }
    if (*ex1) {
      auto cfg = nashadmm::example1_config(ex1_o.seed.value_or(0));
      ex1_o.apply(cfg);
      return emit(nashadmm::run_experiment(cfg));
    }
    auto cfg = nashadmm::example2_config(ex2_o.seed.value_or(0));
    ex2_o.apply(cfg);
    return emit(nashadmm::run_experiment(cfg));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
