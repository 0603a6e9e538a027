#include "nashadmm/config.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace nashadmm {

using nlohmann::json;

ConfigError::ConfigError(const std::string& field, std::size_t line, const std::string& message)
    : std::runtime_error([&] {
        std::string s = "config";
        if (line > 0) s += ":" + std::to_string(line);
        if (!field.empty()) s += ": field " + field;
        return s + ": " + message;
      }()),
      field_(field),
      line_(line) {}

namespace {

// JSON pointer -> 1-based line where the value starts.
using LineMap = std::map<std::string, std::size_t>;

LineMap map_lines(const std::string& text) {
  struct Frame {
    bool object;
    std::string key;
    std::size_t index = 0;
  };
  LineMap lines;
  std::vector<Frame> stack;
  std::size_t line = 1;
  bool awaiting_value = true;
  bool expecting_key = false;

  auto pointer = [&] {
    std::string p;
    for (const auto& f : stack) p += "/" + (f.object ? f.key : std::to_string(f.index));
    return p;
  };
  auto value_start = [&] {
    if (awaiting_value) lines.emplace(pointer(), line);
    awaiting_value = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '\n') {
      ++line;
    } else if (ch == '"') {
      std::string s;
      std::size_t j = i + 1;
      for (; j < text.size() && text[j] != '"'; ++j) {
        if (text[j] == '\\' && j + 1 < text.size()) ++j;
        s += text[j];
      }
      if (expecting_key && !stack.empty() && stack.back().object) {
        stack.back().key = s;
        expecting_key = false;
      } else {
        value_start();
      }
      i = j;
    } else if (ch == '{' || ch == '[') {
      value_start();
      stack.push_back(Frame{ch == '{', {}, 0});
      expecting_key = ch == '{';
      awaiting_value = ch == '[';
    } else if (ch == '}' || ch == ']') {
      if (!stack.empty()) stack.pop_back();
      awaiting_value = false;
      expecting_key = false;
    } else if (ch == ',') {
      if (!stack.empty()) {
        if (stack.back().object) {
          expecting_key = true;
        } else {
          ++stack.back().index;
          awaiting_value = true;
        }
      }
    } else if (ch == ':') {
      awaiting_value = true;
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      value_start();
    }
  }
  return lines;
}

class Node {
 public:
  Node(const json& j, std::string path, const LineMap& lines) : j_(j), path_(std::move(path)), lines_(lines) {}

  [[noreturn]] void fail(const std::string& message) const {
    std::size_t line = 0;
    for (std::string p = path_;; p = p.substr(0, p.rfind('/'))) {
      if (auto it = lines_.find(p); it != lines_.end()) {
        line = it->second;
        break;
      }
      if (p.empty()) break;
    }
    throw ConfigError(path_.empty() ? "/" : path_, line, message);
  }

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }

  Node at(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    if (!j_.contains(key)) fail("missing required field '" + key + "'");
    return Node(j_.at(key), path_ + "/" + key, lines_);
  }

  Node at(std::size_t index) const { return Node(j_.at(index), path_ + "/" + std::to_string(index), lines_); }

  void allow_only(std::initializer_list<const char*> keys) const {
    if (!j_.is_object()) fail("expected an object");
    for (const auto& item : j_.items()) {
      bool known = false;
      for (const char* k : keys) known = known || item.key() == k;
      if (!known) Node(item.value(), path_ + "/" + item.key(), lines_).fail("unknown field");
    }
  }

  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }

  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail("expected a positive number");
    return v;
  }

  std::uint64_t u64() const {
    if (!j_.is_number_integer() || (j_.is_number_integer() && !j_.is_number_unsigned() && j_.get<std::int64_t>() < 0)) {
      fail("expected a non-negative integer");
    }
    return j_.get<std::uint64_t>();
  }

  std::size_t count() const { return static_cast<std::size_t>(u64()); }

  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }

  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  bool is_auto() const { return j_.is_string() && j_.get<std::string>() == "auto"; }

  Eigen::VectorXd vector() const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < j_.size(); ++i) v(static_cast<Eigen::Index>(i)) = at(i).number();
    return v;
  }

  Eigen::MatrixXd matrix() const {
    const auto rows = size();
    if (rows == 0) fail("expected a non-empty matrix");
    const auto cols = at(0).size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      const auto row = at(r);
      if (row.size() != cols) row.fail("ragged matrix row");
      m.row(static_cast<Eigen::Index>(r)) = row.vector().transpose();
    }
    return m;
  }

  Interval interval() const {
    if (size() != 2) fail("expected [lo, hi]");
    Interval iv{at(0).number(), at(1).number()};
    if (!(iv.lo < iv.hi)) fail("expected lo < hi");
    return iv;
  }

  std::pair<double, double> range() const {
    const auto iv = interval();
    return {iv.lo, iv.hi};
  }

 private:
  const json& j_;
  std::string path_;
  const LineMap& lines_;
};

void parse_game(const Node& node, GameSpec& game) {
  const auto kind = node.at("kind").string();
  if (node.has("seed")) game.seed = node.at("seed").u64();

  if (kind == "cournot") {
    node.allow_only({"kind", "seed", "participation", "price_intercepts", "price_slopes", "cost_quad", "cost_lin",
                     "upper_bounds", "normalize"});
    game.kind = GameSpec::Kind::kCournot;
    auto& m = game.cournot;
    m.participation = node.at("participation").matrix();
    m.price_intercepts = node.at("price_intercepts").vector();
    m.price_slopes = node.at("price_slopes").vector();
    m.cost_quad = node.at("cost_quad").vector();
    m.cost_lin = node.at("cost_lin").vector();
    m.upper_bounds = node.at("upper_bounds").vector();
    m.normalize = node.has("normalize") && node.at("normalize").boolean();
  } else if (kind == "cournot-family") {
    node.allow_only({"kind", "seed", "preset", "participation", "random", "price_slope", "q_range", "b_range",
                     "intercept_noise", "total_bound", "normalize"});
    game.kind = GameSpec::Kind::kCournotFamily;
    auto& f = game.family;
    int sources = static_cast<int>(node.has("preset")) + static_cast<int>(node.has("participation")) +
                  static_cast<int>(node.has("random"));
    if (sources != 1) node.fail("give exactly one of 'preset', 'participation' or 'random'");
    if (node.has("preset")) {
      const auto preset = node.at("preset");
      if (preset.string() != "example1") preset.fail("unknown Cournot preset '" + preset.string() + "'");
      f = presets::example1_family();
    } else if (node.has("participation")) {
      f.participation = node.at("participation").matrix();
    } else {
      const auto r = node.at("random");
      r.allow_only({"markets", "firms", "max_markets", "seed"});
      const auto seed = r.has("seed") ? r.at("seed").u64() : game.seed.value_or(0);
      try {
        f.participation = presets::random_participation(r.at("markets").count(), r.at("firms").count(),
                                                        r.at("max_markets").count(), seed);
      } catch (const std::invalid_argument& e) {
        r.fail(e.what());
      }
    }
    if (node.has("price_slope")) f.price_slope = node.at("price_slope").positive();
    if (node.has("q_range")) f.q_range = node.at("q_range").range();
    if (node.has("b_range")) f.b_range = node.at("b_range").range();
    if (node.has("intercept_noise")) f.intercept_noise = node.at("intercept_noise").range();
    if (node.has("total_bound")) f.total_bound = node.at("total_bound").positive();
    if (node.has("normalize")) f.normalize = node.at("normalize").boolean();
  } else if (kind == "quadratic") {
    node.allow_only({"kind", "seed", "Q", "r", "intervals"});
    game.kind = GameSpec::Kind::kQuadratic;
    game.q = node.at("Q").matrix();
    game.r = node.at("r").vector();
    const auto ivs = node.at("intervals");
    game.intervals.clear();
    for (std::size_t i = 0; i < ivs.size(); ++i) game.intervals.push_back(ivs.at(i).interval());
  } else if (kind == "rate-control") {
    node.allow_only({"kind", "seed", "preset", "incidence", "capacities", "chi", "kappa", "max_rate"});
    game.kind = GameSpec::Kind::kRateControl;
    auto& net = game.network;
    if (node.has("preset")) {
      const auto preset = node.at("preset");
      if (preset.string() != "example2-default") preset.fail("unknown rate-control preset '" + preset.string() + "'");
      net = presets::example2_network();
    } else {
      net.incidence = node.at("incidence").matrix().cast<int>();
      net.capacities = node.at("capacities").vector();
      net.chi = node.at("chi").vector();
    }
    if (node.has("kappa")) net.kappa = node.at("kappa").positive();
    if (node.has("max_rate")) net.max_rate = node.at("max_rate").positive();
  } else {
    node.at("kind").fail("unknown game kind '" + kind + "'");
  }
}

void parse_graph(const Node& node, GraphSpec& graph, const std::string& base_dir) {
  node.allow_only({"preset", "edge_list", "n", "edges"});
  const int sources = static_cast<int>(node.has("preset")) + static_cast<int>(node.has("edge_list")) +
                      static_cast<int>(node.has("edges"));
  if (sources != 1) node.fail("give exactly one of 'preset', 'edge_list' or 'edges'");
  if (node.has("n")) graph.n = node.at("n").count();
  if (node.has("preset")) {
    const auto p = node.at("preset");
    if (p.string() != "fig2-ring20" && p.string() != "example2-comm") p.fail("unknown graph preset '" + p.string() + "'");
    graph.preset = p.string();
  } else if (node.has("edge_list")) {
    const auto p = node.at("edge_list");
    std::filesystem::path path(p.string());
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    if (!std::filesystem::exists(path)) p.fail("edge list file '" + path.string() + "' does not exist");
    graph.edge_list_path = path.string();
  } else {
    const auto edges = node.at("edges");
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto edge = edges.at(e);
      if (edge.size() != 2) edge.fail("expected [u, v]");
      const auto u = edge.at(0).count();
      const auto v = edge.at(1).count();
      graph.edges.emplace_back(u, v);
      graph.n = std::max({graph.n, u, v});
    }
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto offset = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
    throw ConfigError("", line, std::string("malformed JSON: ") + e.what());
  }
  const auto lines = map_lines(text);
  const Node root(doc, "", lines);
  root.allow_only({"mode", "seed", "threads", "game", "graph", "solver", "init", "stopping", "output", "baseline",
                   "oracle", "constants"});

  ExperimentConfig cfg;
  if (root.has("mode")) {
    const auto m = root.at("mode");
    const auto s = m.string();
    if (s == "admm") cfg.mode = Mode::kAdmm;
    else if (s == "baseline") cfg.mode = Mode::kBaseline;
    else if (s == "oracle") cfg.mode = Mode::kOracle;
    else if (s == "compare") cfg.mode = Mode::kCompare;
    else m.fail("expected one of admm, baseline, oracle, compare");
  }
  if (root.has("seed")) cfg.seed = root.at("seed").u64();
  if (root.has("threads")) {
    cfg.threads = root.at("threads").count();
    if (cfg.threads == 0) root.at("threads").fail("expected at least one thread");
  }
  parse_game(root.at("game"), cfg.game);
  parse_graph(root.at("graph"), cfg.graph, base_dir);

  if (root.has("solver")) {
    const auto s = root.at("solver");
    s.allow_only({"c", "c0", "c0_factor", "beta"});
    if (s.has("c")) cfg.solver.c = s.at("c").positive();
    if (s.has("c0") && !s.at("c0").is_auto()) cfg.solver.c0 = s.at("c0").positive();
    if (s.has("c0_factor")) cfg.solver.c0_factor = s.at("c0_factor").positive();
    if (s.has("beta")) {
      const auto b = s.at("beta");
      cfg.solver.beta.clear();
      if (b.raw().is_array()) {
        for (std::size_t i = 0; i < b.size(); ++i) cfg.solver.beta.push_back(b.at(i).positive());
        if (cfg.solver.beta.empty()) b.fail("expected at least one beta");
      } else {
        cfg.solver.beta.push_back(b.positive());
      }
    }
  }
  if (root.has("init")) {
    const auto s = root.at("init");
    s.allow_only({"own", "others", "seed"});
    if (s.has("own")) cfg.init.own = s.at("own").interval();
    if (s.has("others")) cfg.init.others = s.at("others").interval();
    if (s.has("seed")) cfg.init.seed = s.at("seed").u64();
  }
  if (root.has("stopping")) {
    const auto s = root.at("stopping");
    s.allow_only({"tol", "max_iter", "target"});
    if (s.has("tol")) cfg.stopping.tol = s.at("tol").positive();
    if (s.has("max_iter")) cfg.stopping.max_iter = s.at("max_iter").count();
    if (s.has("target")) {
      const auto t = s.at("target");
      if (t.string() == "oracle") cfg.stopping.oracle_target = true;
      else if (t.string() != "residual") t.fail("expected 'residual' or 'oracle'");
    }
  }
  if (root.has("output")) {
    const auto s = root.at("output");
    s.allow_only({"csv", "record_every", "paths_csv", "path_players"});
    if (s.has("csv")) cfg.output.csv = s.at("csv").string();
    if (s.has("paths_csv")) cfg.output.paths_csv = s.at("paths_csv").string();
    if (s.has("path_players")) {
      const auto p = s.at("path_players");
      for (std::size_t i = 0; i < p.size(); ++i) {
        const auto player = p.at(i).count();
        if (player == 0) p.at(i).fail("players are numbered from 1");
        cfg.output.path_players.push_back(player - 1);
      }
    }
    if (s.has("record_every")) {
      cfg.output.record_every = s.at("record_every").count();
      if (cfg.output.record_every == 0) s.at("record_every").fail("expected a positive integer");
    }
  }
  if (root.has("baseline")) {
    const auto s = root.at("baseline");
    s.allow_only({"a", "b", "gamma", "max_iter"});
    if (s.has("a")) cfg.baseline.a = s.at("a").positive();
    if (s.has("b")) cfg.baseline.b = s.at("b").number();
    if (s.has("gamma") && !s.at("gamma").is_auto()) cfg.baseline.gamma = s.at("gamma").positive();
    if (s.has("max_iter")) cfg.baseline.max_iter = s.at("max_iter").count();
  }
  if (root.has("oracle")) {
    const auto s = root.at("oracle");
    s.allow_only({"tau", "tol", "max_iter"});
    if (s.has("tau") && !s.at("tau").is_auto()) cfg.oracle.tau = s.at("tau").positive();
    if (s.has("tol")) cfg.oracle.tol = s.at("tol").positive();
    if (s.has("max_iter")) cfg.oracle.max_iter = s.at("max_iter").count();
  }
  if (root.has("constants")) {
    const auto s = root.at("constants");
    s.allow_only({"source", "samples", "box", "seed"});
    if (s.has("source")) {
      const auto src = s.at("source");
      if (src.string() == "sampled") cfg.constants.sampled = true;
      else if (src.string() != "exact") src.fail("expected 'exact' or 'sampled'");
    }
    if (s.has("samples")) cfg.constants.samples = s.at("samples").count();
    if (s.has("box")) cfg.constants.box = s.at("box").interval();
    if (s.has("seed")) cfg.constants.seed = s.at("seed").u64();
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(buf.str(), dir.empty() ? "." : dir.string());
}

std::unique_ptr<GameModel> build_game(const ExperimentConfig& config) {
  const auto& g = config.game;
  switch (g.kind) {
    case GameSpec::Kind::kCournot:
      return std::make_unique<CournotGame>(g.cournot);
    case GameSpec::Kind::kCournotFamily:
      return std::make_unique<CournotGame>(presets::generate_cournot(g.family, config.game_seed()));
    case GameSpec::Kind::kQuadratic:
      return std::make_unique<QuadraticGame>(g.q, g.r, g.intervals);
    case GameSpec::Kind::kRateControl:
      return std::make_unique<RateControlGame>(g.network);
  }
  throw std::logic_error("unhandled game kind");
}

CommGraph build_graph(const ExperimentConfig& config) {
  const auto& g = config.graph;
  if (g.preset) return presets::graph_by_name(*g.preset);
  if (g.edge_list_path) return read_edge_list_file(*g.edge_list_path, g.n);
  return CommGraph::from_edge_list(g.n, g.edges);
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::kAdmm: return "admm";
    case Mode::kBaseline: return "baseline";
    case Mode::kOracle: return "oracle";
    case Mode::kCompare: return "compare";
  }
  return "unknown";
}

}  // namespace nashadmm
