#include "commnash/zero_sum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace commnash {

namespace {

constexpr double kPivotEps = 1e-12;
constexpr double kReducedCostEps = 1e-13;
// Consecutive non-improving pivots before falling back to Bland's rule.
constexpr int kDegenerateStreak = 50;

MixedStrategy clean_strategy(Vector v) {
  v = v.cwiseMax(0.0);
  if (!(v.sum() > 0.0)) return MixedStrategy::uniform(static_cast<std::size_t>(v.size()));
  return MixedStrategy(v);
}

// Tableau for: maximize sum(q) subject to B q <= 1, q >= 0, with B = A + 1 > 0.
// Columns [0, n) are q, [n, n + m) are slacks, the last column is the rhs.
// Row m holds reduced costs; its rhs holds minus the objective.
class Tableau {
 public:
  explicit Tableau(const Matrix& a)
      : m_(a.rows()), n_(a.cols()), t_(Matrix::Zero(m_ + 1, n_ + m_ + 1)), basis_(m_) {
    t_.topLeftCorner(m_, n_) = a.array() + 1.0;
    t_.block(0, n_, m_, m_).setIdentity();
    t_.col(n_ + m_).head(m_).setOnes();
    t_.row(m_).head(n_).setOnes();
    for (Eigen::Index i = 0; i < m_; ++i) basis_[static_cast<std::size_t>(i)] = n_ + i;
  }

  // Returns false when the pivot cap is reached before optimality.
  bool optimize(long long pivot_cap) {
    int streak = 0;
    double last_objective = objective();
    for (long long pivots = 0;; ++pivots) {
      const Eigen::Index enter = choose_entering(streak >= kDegenerateStreak);
      if (enter < 0) return true;
      if (pivots >= pivot_cap) return false;
      const Eigen::Index leave = choose_leaving(enter);
      // B > 0 keeps the feasible region bounded, so a leaving row always exists.
      if (leave < 0) return false;
      pivot(leave, enter);
      const double obj = objective();
      streak = obj > last_objective + 1e-15 ? 0 : streak + 1;
      last_objective = obj;
    }
  }

  double objective() const { return -t_(m_, n_ + m_); }

  Vector primal() const {
    Vector q = Vector::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Eigen::Index var = basis_[static_cast<std::size_t>(i)];
      if (var < n_) q[var] = t_(i, n_ + m_);
    }
    return q;
  }

  Vector dual() const { return -t_.row(m_).segment(n_, m_).transpose(); }

 private:
  Eigen::Index choose_entering(bool bland) const {
    Eigen::Index best = -1;
    double best_cost = kReducedCostEps;
    for (Eigen::Index j = 0; j < n_ + m_; ++j) {
      const double r = t_(m_, j);
      if (r > best_cost) {
        best = j;
        if (bland) return j;
        best_cost = r;
      }
    }
    return best;
  }

  Eigen::Index choose_leaving(Eigen::Index enter) const {
    Eigen::Index best = -1;
    double best_ratio = 0.0;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double coef = t_(i, enter);
      if (coef <= kPivotEps) continue;
      const double ratio = t_(i, n_ + m_) / coef;
      if (best < 0 || ratio < best_ratio - 1e-15 ||
          (ratio <= best_ratio + 1e-15 &&
           basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(best)])) {
        best = i;
        best_ratio = ratio;
      }
    }
    return best;
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  Eigen::Index m_;
  Eigen::Index n_;
  Matrix t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

double guaranteed_value(const Matrix& a, const MixedStrategy& max_strategy) {
  return (a.transpose() * max_strategy.probs()).minCoeff();
}

double best_reply_value(const Matrix& a, const MixedStrategy& min_strategy) {
  return (a * min_strategy.probs()).maxCoeff();
}

ZeroSumSolution solve_zero_sum(const Matrix& a, double tolerance) {
  if (a.rows() < 1 || a.cols() < 1) throw DimensionError("zero-sum matrix must be non-empty");
  validate_payoff_range(a, "A");

  const auto rows = static_cast<std::size_t>(a.rows());
  const auto cols = static_cast<std::size_t>(a.cols());
  ZeroSumSolution sol;

  if (a.maxCoeff() == a.minCoeff()) {
    sol.max_strategy = MixedStrategy::uniform(rows);
    sol.min_strategy = MixedStrategy::uniform(cols);
    sol.value = a(0, 0);
    sol.certificate_gap = 0.0;
    return sol;
  }

  Tableau tableau(a);
  const auto dim = static_cast<long long>(std::max(rows, cols));
  const bool converged = tableau.optimize(10 * dim * dim);

  sol.max_strategy = clean_strategy(tableau.dual());
  sol.min_strategy = clean_strategy(tableau.primal());
  const double upper = best_reply_value(a, sol.min_strategy);
  const double lower = guaranteed_value(a, sol.max_strategy);
  sol.certificate_gap = std::max(0.0, upper - lower);
  sol.value = 0.5 * (upper + lower);

  if (!converged) {
    std::ostringstream os;
    os << "zero-sum simplex hit the pivot cap of " << 10 * dim * dim
       << " (best certificate gap " << sol.certificate_gap << ")";
    throw ZeroSumError(os.str(), sol.certificate_gap);
  }
  if (sol.certificate_gap > tolerance) {
    std::ostringstream os;
    os << "zero-sum certificate gap " << sol.certificate_gap << " exceeds tolerance " << tolerance;
    throw ZeroSumError(os.str(), sol.certificate_gap);
  }
  return sol;
}

}  // namespace commnash
