#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nashadmm/admm.hpp"
#include "nashadmm/config.hpp"
#include "nashadmm/theory.hpp"

namespace nashadmm {

/// Outcome of one experiment: ordered key = value summary plus the raw runs.
struct ExperimentReport {
  std::vector<std::pair<std::string, std::string>> summary;
  std::optional<RunResult> admm;
  std::optional<RunResult> baseline;
  std::optional<Eigen::VectorXd> x_star;
  std::optional<TheoryConstants> theory;
  std::vector<std::string> csv_files;
  /// Nonzero when the mode's own success test failed (compare: ADMM did not
  /// converge or the speedup fell below 10).
  int exit_code = 0;

  void add(const std::string& key, const std::string& value);
  std::optional<std::string> value(const std::string& key) const;
  void write(std::ostream& out) const;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

/// Networked Cournot reproduction: preset participation, z = 0.01, q, b ~
/// U(1, 2), normalized costs, 20-vertex ring with two chords, c = 1, c0 = 22.6,
/// beta = 10, own actions ~ U(0, 0.5), estimates ~ U(0, 1).
ExperimentConfig example1_config(std::uint64_t seed);
/// Rate-control reproduction: 16 links, 15 users, C = chi = kappa = 10,
/// c = 1, c0 = 31, beta = 14, compared against the diminishing-step baseline
/// at action tolerance 1e-4.
ExperimentConfig example2_config(std::uint64_t seed);

ExperimentReport reproduce_example1(std::uint64_t seed);
ExperimentReport reproduce_example2(std::uint64_t seed);

/// Constants and parameter conditions only; no solver run.
ExperimentReport check_params(const ExperimentConfig& config);

/// Summary formatting: "%.10g" for reals, space-separated vectors.
std::string summary_real(double v);
std::string summary_vector(const Eigen::VectorXd& v);

}  // namespace nashadmm
