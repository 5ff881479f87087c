#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace commnash {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Role { kRow, kColumn };

inline Role opponent(Role r) { return r == Role::kRow ? Role::kColumn : Role::kRow; }
const char* to_string(Role r);
Role role_from_string(const std::string& s);

// Probability mass at or below this is treated as outside the support.
inline constexpr double kSupportThreshold = 1e-9;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PayoffRangeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Probability vector over pure strategies. Construction rejects negative or
// non-finite entries and normalizes the remainder to sum to one.
class MixedStrategy {
 public:
  MixedStrategy() = default;
  explicit MixedStrategy(std::vector<double> probs);
  explicit MixedStrategy(const Vector& probs);

  static MixedStrategy pure(std::size_t n, std::size_t index);
  static MixedStrategy uniform(std::size_t n);
  // Empirical distribution of a multiset of pure strategy indices.
  static MixedStrategy empirical(std::size_t n, const std::vector<std::size_t>& draws);

  std::size_t size() const { return static_cast<std::size_t>(probs_.size()); }
  double operator[](std::size_t i) const { return probs_[static_cast<Eigen::Index>(i)]; }
  const Vector& probs() const { return probs_; }
  std::vector<double> to_vector() const;

  bool in_support(std::size_t i) const { return (*this)[i] > kSupportThreshold; }
  std::vector<std::size_t> support() const;

  bool operator==(const MixedStrategy& other) const;

 private:
  Vector probs_;
};

struct StrategyProfile {
  MixedStrategy row;
  MixedStrategy col;
};

// Pair of n x n payoff matrices with every entry in [0,1]. Immutable.
class BimatrixGame {
 public:
  BimatrixGame(Matrix row_payoffs, Matrix col_payoffs);

  std::size_t n() const { return static_cast<std::size_t>(r_.rows()); }
  const Matrix& R() const { return r_; }
  const Matrix& C() const { return c_; }
  const Matrix& matrix(Role who) const { return who == Role::kRow ? r_ : c_; }

 private:
  Matrix r_;
  Matrix c_;
};

// Throws PayoffRangeError naming the first offending entry.
void validate_payoff_range(const Matrix& m, const std::string& name);

struct BestResponse {
  std::size_t index = 0;
  double value = 0.0;
};

struct RegretReport {
  double row_regret = 0.0;
  double col_regret = 0.0;
  double eps_ne = 0.0;
  double eps_wsne = 0.0;
};

// Expected payoff x^T M y for the given player's matrix.
double payoff(const BimatrixGame& game, const StrategyProfile& profile, Role who);

// Expected payoff of every pure strategy of `who` against the opponent's mixed
// strategy. For the row player this is M y; for the column player x^T M.
Vector pure_payoffs(const Matrix& payoff_matrix, const MixedStrategy& opponent, Role who);

// Argmax over pure strategies, lowest index on ties.
BestResponse best_response(const Matrix& payoff_matrix, const MixedStrategy& opponent, Role who);

// Lowest-index argmax of a payoff vector.
std::size_t argmax_lowest(const Vector& values);

RegretReport regret_report(const BimatrixGame& game, const StrategyProfile& profile);

double total_variation(const MixedStrategy& a, const MixedStrategy& b);

}  // namespace commnash
