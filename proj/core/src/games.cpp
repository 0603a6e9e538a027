#include "nashadmm/games.hpp"

#include <cmath>
#include <limits>

namespace nashadmm {

Eigen::VectorXd pseudo_gradient(const GameModel& game, const Eigen::VectorXd& x) {
  const auto n = game.n_players();
  if (static_cast<std::size_t>(x.size()) != n) {
    throw std::invalid_argument("pseudo_gradient: profile has wrong length");
  }
  Eigen::VectorXd f(static_cast<Eigen::Index>(n));
  const std::span<const double> y(x.data(), n);
  for (std::size_t i = 0; i < n; ++i) f(static_cast<Eigen::Index>(i)) = game.partial_gradient(i, y);
  return f;
}

Eigen::VectorXd extended_pseudo_gradient(const GameModel& game, const Eigen::VectorXd& stacked) {
  const auto n = game.n_players();
  if (static_cast<std::size_t>(stacked.size()) != n * n) {
    throw std::invalid_argument("extended_pseudo_gradient: stacked vector must have N^2 entries");
  }
  Eigen::VectorXd f(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    f(static_cast<Eigen::Index>(i)) = game.partial_gradient(i, {stacked.data() + i * n, n});
  }
  return f;
}

Eigen::VectorXd project_actions(const GameModel& game, const Eigen::VectorXd& x) {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out(i) = project_action(game, static_cast<std::size_t>(i), x(i));
  }
  return out;
}

// --- QuadraticGame ----------------------------------------------------------

QuadraticGame::QuadraticGame(Eigen::MatrixXd q, Eigen::VectorXd r, std::vector<Interval> intervals)
    : q_(std::move(q)), r_(std::move(r)), intervals_(std::move(intervals)) {
  const auto n = r_.size();
  if (n == 0) throw InvalidGameError("game needs at least one player");
  if (q_.rows() != n || q_.cols() != n) throw InvalidGameError("Q must be N x N with N = len(r)");
  if (static_cast<Eigen::Index>(intervals_.size()) != n) {
    throw InvalidGameError("one action interval per player is required");
  }
  if (!q_.allFinite() || !r_.allFinite()) throw InvalidGameError("Q and r must be finite");
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& iv = intervals_[i];
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi)) {
      throw InvalidGameError("action interval of player " + std::to_string(i + 1) +
                             " must be finite with lo < hi");
    }
  }
}

double QuadraticGame::partial_gradient(std::size_t i, std::span<const double> y) const {
  const auto row = static_cast<Eigen::Index>(i);
  const Eigen::Map<const Eigen::VectorXd> v(y.data(), static_cast<Eigen::Index>(y.size()));
  return q_.row(row).dot(v) + r_(row);
}

double QuadraticGame::cost(std::size_t i, std::span<const double> y) const {
  const auto row = static_cast<Eigen::Index>(i);
  const Eigen::Map<const Eigen::VectorXd> v(y.data(), static_cast<Eigen::Index>(y.size()));
  const double own = v(row);
  const double coupling = q_.row(row).dot(v) - q_(row, row) * own;
  return 0.5 * q_(row, row) * own * own + own * coupling + r_(row) * own;
}

std::optional<GameConstants> QuadraticGame::constants() const {
  const Eigen::MatrixXd sym = 0.5 * (q_ + q_.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  const double mu = eig.eigenvalues()(0);
  if (!(mu > 0.0)) {
    throw InvalidGameError("pseudo-gradient is not strongly monotone: lambda_min(sym(Q)) = " +
                           std::to_string(mu));
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(q_);
  const double norm = svd.singularValues()(0);
  return GameConstants{mu, norm, norm};
}

// --- CournotGame ------------------------------------------------------------

struct CournotGame::Algebra {
  Eigen::MatrixXd raw_q;
  Eigen::VectorXd raw_r;
  Eigen::VectorXd n;
  Eigen::VectorXd scale;
  Eigen::MatrixXd q;
  Eigen::VectorXd r;
  std::vector<Interval> intervals;
};

CournotGame::CournotGame(CournotMarkets markets) : CournotGame(markets, compute_algebra(markets)) {}

CournotGame::CournotGame(const CournotMarkets& markets, Algebra a)
    : QuadraticGame(std::move(a.q), std::move(a.r), std::move(a.intervals)),
      markets_(markets),
      raw_q_(std::move(a.raw_q)),
      raw_r_(std::move(a.raw_r)),
      n_(std::move(a.n)),
      scale_(std::move(a.scale)) {}

CournotGame::Algebra CournotGame::compute_algebra(const CournotMarkets& m) {
  const auto& a = m.participation;
  const auto markets = a.rows();
  const auto firms = a.cols();
  if (markets == 0 || firms == 0) throw InvalidGameError("participation matrix is empty");
  if (m.price_intercepts.size() != markets || m.price_slopes.size() != markets) {
    throw InvalidGameError("price vectors must have one entry per market");
  }
  if (m.cost_quad.size() != firms || m.cost_lin.size() != firms || m.upper_bounds.size() != firms) {
    throw InvalidGameError("cost and bound vectors must have one entry per firm");
  }
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double v = a.data()[k];
    if (v != 0.0 && v != 1.0) throw InvalidGameError("participation entries must be 0 or 1");
  }
  if ((m.price_intercepts.array() <= 0.0).any()) throw InvalidGameError("price intercepts must be > 0");
  if ((m.price_slopes.array() <= 0.0).any()) throw InvalidGameError("price slopes must be > 0");
  if ((m.cost_quad.array() <= 0.0).any()) throw InvalidGameError("cost_quad must be > 0");
  if ((m.upper_bounds.array() <= 0.0).any()) throw InvalidGameError("upper bounds must be > 0");

  CournotGame::Algebra out;
  out.n = a.colwise().sum().transpose();
  for (Eigen::Index i = 0; i < firms; ++i) {
    if (out.n(i) < 1.0) {
      throw InvalidGameError("firm " + std::to_string(i + 1) + " participates in no market");
    }
  }
  const auto z = m.price_slopes.asDiagonal();
  const Eigen::MatrixXd aza = a.transpose() * z * a;
  Eigen::VectorXd sigma(firms);
  for (Eigen::Index i = 0; i < firms; ++i) {
    sigma(i) = 2.0 * out.n(i) * out.n(i) * m.cost_quad(i) + aza(i, i);
  }
  out.raw_q = Eigen::MatrixXd(sigma.asDiagonal()) + aza;
  out.raw_r = out.n.cwiseProduct(m.cost_lin) - a.transpose() * m.price_intercepts;

  out.scale = Eigen::VectorXd::Ones(firms);
  if (m.normalize) {
    for (Eigen::Index i = 0; i < firms; ++i) out.scale(i) = 2.0 * out.n(i) * out.n(i) * m.cost_quad(i);
  }
  const Eigen::VectorXd inv = out.scale.cwiseInverse();
  out.q = inv.asDiagonal() * out.raw_q;
  out.r = inv.cwiseProduct(out.raw_r);
  out.intervals.reserve(static_cast<std::size_t>(firms));
  for (Eigen::Index i = 0; i < firms; ++i) out.intervals.push_back({0.0, m.upper_bounds(i)});
  return out;
}

double CournotGame::cost(std::size_t i, std::span<const double> y) const {
  const auto col = static_cast<Eigen::Index>(i);
  const Eigen::Map<const Eigen::VectorXd> x(y.data(), static_cast<Eigen::Index>(y.size()));
  const auto& a = markets_.participation;
  const double own = x(col);
  const double ni = n_(col);
  const double production = ni * ni * markets_.cost_quad(col) * own * own + ni * markets_.cost_lin(col) * own;
  const Eigen::VectorXd price = markets_.price_intercepts - markets_.price_slopes.cwiseProduct(a * x);
  return (production - price.dot(a.col(col)) * own) / scale_(col);
}

GameConstants cournot_constants(const CournotGame& game) { return *game.constants(); }

}  // namespace nashadmm
