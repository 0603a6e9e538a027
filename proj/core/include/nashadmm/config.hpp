#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nashadmm/games.hpp"
#include "nashadmm/graph.hpp"
#include "nashadmm/presets.hpp"
#include "nashadmm/rate_control.hpp"

namespace nashadmm {

/// Parse or validation failure; `line()` is 0 when no source line is known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, std::size_t line, const std::string& message);
  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

enum class Mode { kAdmm, kBaseline, kOracle, kCompare };

struct GameSpec {
  enum class Kind { kCournot, kCournotFamily, kQuadratic, kRateControl };
  Kind kind = Kind::kCournot;
  std::optional<std::uint64_t> seed;

  CournotMarkets cournot;
  presets::CournotFamily family;

  Eigen::MatrixXd q;
  Eigen::VectorXd r;
  std::vector<Interval> intervals;

  RateControlNetwork network;
};

struct GraphSpec {
  std::optional<std::string> preset;
  std::optional<std::string> edge_list_path;
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

struct SolverSpec {
  double c = 1.0;
  std::optional<double> c0;  ///< absent means auto: c0_factor * c_min.
  double c0_factor = 1.001;
  std::vector<double> beta{1.0};  ///< one entry is broadcast to every player.
};

struct InitConfig {
  std::optional<Interval> own;
  Interval others{0.0, 1.0};
  std::optional<std::uint64_t> seed;
};

struct StoppingConfig {
  double tol = 1e-8;
  std::size_t max_iter = 100'000;
  /// Stop on distance to the oracle equilibrium instead of the step residual.
  bool oracle_target = false;
};

struct OutputConfig {
  std::optional<std::string> csv;
  std::size_t record_every = 1;
  /// Own actions of `path_players` (0-based) at every recorded row.
  std::optional<std::string> paths_csv;
  std::vector<std::size_t> path_players;
};

struct BaselineConfig {
  double a = 1.0;
  double b = 1.0;
  std::optional<double> gamma;  ///< absent means 0.9 / (d* + 1).
  std::optional<std::size_t> max_iter;
};

struct OracleConfig {
  std::optional<double> tau;
  double tol = 1e-12;
  std::size_t max_iter = 10'000'000;
};

struct ConstantsConfig {
  bool sampled = false;
  std::size_t samples = 2000;
  std::optional<Interval> box;  ///< sampling box; the action box when absent.
  std::optional<std::uint64_t> seed;
};

struct ExperimentConfig {
  Mode mode = Mode::kAdmm;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  GameSpec game;
  GraphSpec graph;
  SolverSpec solver;
  InitConfig init;
  StoppingConfig stopping;
  OutputConfig output;
  BaselineConfig baseline;
  OracleConfig oracle;
  ConstantsConfig constants;

  std::uint64_t game_seed() const { return game.seed.value_or(seed); }
  std::uint64_t init_seed() const { return init.seed.value_or(seed); }
  std::uint64_t constants_seed() const { return constants.seed.value_or(seed); }
};

/// Parses a JSON document. Relative edge-list paths resolve against `base_dir`.
ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

std::unique_ptr<GameModel> build_game(const ExperimentConfig& config);
CommGraph build_graph(const ExperimentConfig& config);

std::string to_string(Mode mode);

}  // namespace nashadmm
