#include "commnash/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace commnash {

const char* to_string(Role r) { return r == Role::kRow ? "row" : "col"; }

Role role_from_string(const std::string& s) {
  if (s == "row") return Role::kRow;
  if (s == "col" || s == "column") return Role::kColumn;
  throw std::invalid_argument("unknown role '" + s + "'");
}

namespace {

Vector normalized(Vector v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < 0.0) {
      std::ostringstream os;
      os << "mixed strategy entry " << i << " is " << v[i] << "; expected a finite value >= 0";
      throw std::invalid_argument(os.str());
    }
  }
  const double total = v.sum();
  if (v.size() == 0 || !(total > 0.0)) {
    throw std::invalid_argument("mixed strategy must have positive total mass");
  }
  return v / total;
}

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    std::ostringstream os;
    os << what << ": dimension " << got << " does not match " << want;
    throw DimensionError(os.str());
  }
}

}  // namespace

MixedStrategy::MixedStrategy(std::vector<double> probs)
    : probs_(normalized(Eigen::Map<const Vector>(probs.data(), static_cast<Eigen::Index>(probs.size())))) {}

MixedStrategy::MixedStrategy(const Vector& probs) : probs_(normalized(probs)) {}

MixedStrategy MixedStrategy::pure(std::size_t n, std::size_t index) {
  if (index >= n) throw std::out_of_range("pure strategy index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(n));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return MixedStrategy(v);
}

MixedStrategy MixedStrategy::uniform(std::size_t n) {
  return MixedStrategy(Vector::Ones(static_cast<Eigen::Index>(n)));
}

MixedStrategy MixedStrategy::empirical(std::size_t n, const std::vector<std::size_t>& draws) {
  if (draws.empty()) throw std::invalid_argument("empirical distribution of an empty sample");
  Vector counts = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t d : draws) {
    if (d >= n) throw std::out_of_range("sampled index out of range");
    counts[static_cast<Eigen::Index>(d)] += 1.0;
  }
  return MixedStrategy(counts);
}

std::vector<double> MixedStrategy::to_vector() const {
  return std::vector<double>(probs_.data(), probs_.data() + probs_.size());
}

std::vector<std::size_t> MixedStrategy::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (in_support(i)) out.push_back(i);
  }
  return out;
}

bool MixedStrategy::operator==(const MixedStrategy& other) const {
  return probs_.size() == other.probs_.size() && probs_ == other.probs_;
}

void validate_payoff_range(const Matrix& m, const std::string& name) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream os;
        os << name << "[" << i << "][" << j << "] = " << v << " is outside [0,1]";
        throw PayoffRangeError(os.str());
      }
    }
  }
}

BimatrixGame::BimatrixGame(Matrix row_payoffs, Matrix col_payoffs)
    : r_(std::move(row_payoffs)), c_(std::move(col_payoffs)) {
  if (r_.rows() < 1 || r_.rows() != r_.cols()) {
    throw DimensionError("row payoff matrix must be square with n >= 1");
  }
  if (c_.rows() != r_.rows() || c_.cols() != r_.cols()) {
    throw DimensionError("column payoff matrix must match the row payoff matrix dimensions");
  }
  validate_payoff_range(r_, "R");
  validate_payoff_range(c_, "C");
}

double payoff(const BimatrixGame& game, const StrategyProfile& profile, Role who) {
  require_dim(profile.row.size(), game.n(), "row strategy");
  require_dim(profile.col.size(), game.n(), "column strategy");
  return profile.row.probs().dot(game.matrix(who) * profile.col.probs());
}

Vector pure_payoffs(const Matrix& payoff_matrix, const MixedStrategy& opponent, Role who) {
  if (who == Role::kRow) {
    require_dim(opponent.size(), static_cast<std::size_t>(payoff_matrix.cols()), "opponent strategy");
    return payoff_matrix * opponent.probs();
  }
  require_dim(opponent.size(), static_cast<std::size_t>(payoff_matrix.rows()), "opponent strategy");
  return payoff_matrix.transpose() * opponent.probs();
}

std::size_t argmax_lowest(const Vector& values) {
  std::size_t best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values[i] > values[static_cast<Eigen::Index>(best)]) best = static_cast<std::size_t>(i);
  }
  return best;
}

BestResponse best_response(const Matrix& payoff_matrix, const MixedStrategy& opponent, Role who) {
  const Vector values = pure_payoffs(payoff_matrix, opponent, who);
  const std::size_t idx = argmax_lowest(values);
  return {idx, values[static_cast<Eigen::Index>(idx)]};
}

namespace {

// Largest gap between the best pure payoff and any supported pure strategy.
double worst_supported_gap(const Vector& values, double best, const MixedStrategy& own) {
  double gap = 0.0;
  for (std::size_t i = 0; i < own.size(); ++i) {
    if (own.in_support(i)) gap = std::max(gap, best - values[static_cast<Eigen::Index>(i)]);
  }
  return gap;
}

}  // namespace

RegretReport regret_report(const BimatrixGame& game, const StrategyProfile& profile) {
  require_dim(profile.row.size(), game.n(), "row strategy");
  require_dim(profile.col.size(), game.n(), "column strategy");

  const Vector row_values = pure_payoffs(game.R(), profile.col, Role::kRow);
  const Vector col_values = pure_payoffs(game.C(), profile.row, Role::kColumn);
  const double row_best = row_values.maxCoeff();
  const double col_best = col_values.maxCoeff();

  RegretReport rep;
  rep.row_regret = std::max(0.0, row_best - profile.row.probs().dot(row_values));
  rep.col_regret = std::max(0.0, col_best - profile.col.probs().dot(col_values));
  rep.eps_ne = std::max(rep.row_regret, rep.col_regret);
  // Mass at or below the support threshold still counts toward eps_ne, so the
  // well-supported value is floored at eps_ne.
  rep.eps_wsne = std::max({worst_supported_gap(row_values, row_best, profile.row),
                           worst_supported_gap(col_values, col_best, profile.col), rep.eps_ne});
  return rep;
}

double total_variation(const MixedStrategy& a, const MixedStrategy& b) {
  require_dim(a.size(), b.size(), "total variation");
  return 0.5 * (a.probs() - b.probs()).cwiseAbs().sum();
}

}  // namespace commnash
