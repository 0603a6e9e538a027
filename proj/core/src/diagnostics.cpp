#include "nashadmm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nashadmm/rng.hpp"

namespace nashadmm {

namespace {

std::size_t block_count(const Eigen::VectorXd& stacked, std::size_t n) {
  if (static_cast<std::size_t>(stacked.size()) != n * n) {
    throw std::invalid_argument("stacked vector must have N^2 entries");
  }
  return n;
}

}  // namespace

Eigen::VectorXd own_actions(const Eigen::VectorXd& stacked, std::size_t n) {
  block_count(stacked, n);
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) x(static_cast<Eigen::Index>(i)) = stacked(static_cast<Eigen::Index>(i * n + i));
  return x;
}

double consensus_residual(const Eigen::VectorXd& stacked, const CommGraph& g) {
  const auto n = block_count(stacked, g.size());
  const auto len = static_cast<Eigen::Index>(n);
  double sum = 0.0;
  for (const auto& e : g.edges()) {
    sum += (stacked.segment(static_cast<Eigen::Index>(e.u * n), len) -
            stacked.segment(static_cast<Eigen::Index>(e.v * n), len))
               .squaredNorm();
  }
  return sum;
}

double dual_sum_norm(const Eigen::VectorXd& stacked_duals, std::size_t n) {
  block_count(stacked_duals, n);
  const auto len = static_cast<Eigen::Index>(n);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(len);
  for (std::size_t i = 0; i < n; ++i) total += stacked_duals.segment(static_cast<Eigen::Index>(i * n), len);
  return total.lpNorm<Eigen::Infinity>();
}

double phi_weighted_difference(const Eigen::VectorXd& previous, const Eigen::VectorXd& current,
                               const AdmmParams& params, const CommGraph& g) {
  return phi_weighted_difference(previous, current, params.proximal_weight_matrix(g), params.c, g);
}

double phi_weighted_difference(const Eigen::VectorXd& previous, const Eigen::VectorXd& current,
                               const Eigen::MatrixXd& h, double c, const CommGraph& g) {
  const auto n = block_count(current, g.size());
  const auto len = static_cast<Eigen::Index>(n);
  const Eigen::VectorXd dx = current - previous;
  // (H kron I) dx, block i = sum_j H_ij dx^j.
  double weighted = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd hi = Eigen::VectorXd::Zero(len);
    for (std::size_t j = 0; j < n; ++j) {
      const double hij = h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (hij != 0.0) hi += hij * dx.segment(static_cast<Eigen::Index>(j * n), len);
    }
    weighted += dx.segment(static_cast<Eigen::Index>(i * n), len).dot(hi);
  }
  return weighted + c * consensus_residual(current, g);
}

std::vector<std::pair<std::size_t, double>> lyapunov_difference_series(const std::vector<IterationTrace>& trace) {
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t idx = 0; idx < trace.size(); ++idx) {
    if (idx > 0 && trace[idx].k != trace[idx - 1].k + 1) {
      throw UnsupportedTraceError("trace has a gap between k=" + std::to_string(trace[idx - 1].k) +
                                  " and k=" + std::to_string(trace[idx].k) +
                                  "; record every iteration to evaluate the Lyapunov series");
    }
    if (trace[idx].k >= 1) out.emplace_back(trace[idx].k, trace[idx].delta_z_phi);
  }
  return out;
}

bool is_non_increasing(const std::vector<std::pair<std::size_t, double>>& series, double slack) {
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i].second > series[i - 1].second + slack) return false;
  }
  return true;
}

double consensus_rate_product(const IterationTrace& t) {
  return static_cast<double>(t.k) * t.consensus_residual;
}

QuartileMaxima quartile_maxima(const std::vector<IterationTrace>& trace, double (*metric)(const IterationTrace&)) {
  if (trace.size() < 4) throw UnsupportedTraceError("quartile comparison needs at least four trace rows");
  const std::size_t quarter = trace.size() / 4;
  QuartileMaxima out{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < quarter; ++i) out.first = std::max(out.first, metric(trace[i]));
  for (std::size_t i = trace.size() - quarter; i < trace.size(); ++i) out.last = std::max(out.last, metric(trace[i]));
  return out;
}

double ne_residual(const Eigen::VectorXd& x, const GameModel& game, double tau) {
  if (!(tau > 0.0)) throw ParameterError("ne_residual requires tau > 0");
  const Eigen::VectorXd step = x - tau * pseudo_gradient(game, x);
  return (x - project_actions(game, step)).lpNorm<Eigen::Infinity>();
}

double restricted_monotonicity_margin(const GameModel& game, const CommGraph& g, double c0, double mu_bar,
                                      const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const auto n = game.n_players();
  const Eigen::VectorXd fx = extended_pseudo_gradient(game, x);
  const Eigen::VectorXd fy = extended_pseudo_gradient(game, y);
  const Eigen::VectorXd d = x - y;
  double lhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i * n + i);
    lhs += d(ii) * (fx(static_cast<Eigen::Index>(i)) - fy(static_cast<Eigen::Index>(i)));
  }
  lhs += c0 * consensus_residual(d, g);
  // Below c_min the modulus is nonpositive; the probe then tests plain
  // monotonicity (margin against 0).
  return lhs - std::max(mu_bar, 0.0) * d.squaredNorm();
}

MonotonicityProbe restricted_monotonicity_probe(const QuadraticGame& game, const CommGraph& g, double c0,
                                                std::size_t n_samples, std::uint64_t seed, double lo, double hi) {
  const auto n = game.n_players();
  if (g.size() != n) throw std::invalid_argument("graph and game sizes differ");
  const auto k = game.constants().value();
  MonotonicityProbe out;
  out.mu_bar = mu_bar(k.mu, k.theta, k.theta0, n, g.algebraic_connectivity(), c0);
  out.min_margin = std::numeric_limits<double>::infinity();
  auto rng = Rng::stream(seed, StreamPurpose::kProbe);
  const auto nn = static_cast<Eigen::Index>(n * n);
  for (std::size_t s = 0; s < n_samples; ++s) {
    Eigen::VectorXd x(nn);
    for (Eigen::Index i = 0; i < nn; ++i) x(i) = rng.uniform(lo, hi);
    Eigen::VectorXd y0(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < y0.size(); ++i) y0(i) = rng.uniform(lo, hi);
    const Eigen::VectorXd y = y0.replicate(static_cast<Eigen::Index>(n), 1);
    const double margin = restricted_monotonicity_margin(game, g, c0, out.mu_bar, x, y);
    out.min_margin = std::min(out.min_margin, margin);
    if (margin < -1e-9) ++out.violations;
  }
  return out;
}

TraceRecorder::TraceRecorder(const CommGraph& g, const AdmmParams* params, std::optional<Eigen::VectorXd> oracle,
                             const Eigen::VectorXd& initial_actions, std::uint32_t flags)
    : g_(g), oracle_(std::move(oracle)), flags_(flags) {
  if (params) {
    h_ = params->proximal_weight_matrix(g);
    c_ = params->c;
  }
  if (oracle_) {
    initial_error_ = (initial_actions - *oracle_).norm();
  } else {
    flags_ |= kNoOracle;
  }
}

IterationTrace TraceRecorder::make(std::size_t k, const Eigen::VectorXd& previous_x, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& w) const {
  const auto n = g_.size();
  IterationTrace t;
  t.k = k;
  if (oracle_) {
    const double err = (own_actions(x, n) - *oracle_).norm();
    if (initial_error_ > 0.0) {
      t.rel_error = err / initial_error_;
    } else {
      t.rel_error = err == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    }
  } else {
    t.rel_error = std::numeric_limits<double>::quiet_NaN();
  }
  t.consensus_residual = consensus_residual(x, g_);
  t.dual_sum_norm = w.size() == 0 ? 0.0 : dual_sum_norm(w, n);
  if (k > 0) {
    t.delta_x_norm = (x - previous_x).lpNorm<Eigen::Infinity>();
    t.delta_z_phi = h_ ? phi_weighted_difference(previous_x, x, *h_, c_, g_) : 0.0;
  }
  t.rate_product = static_cast<double>(k) * t.delta_z_phi;
  t.condition_flags = flags_;
  return t;
}

}  // namespace nashadmm
