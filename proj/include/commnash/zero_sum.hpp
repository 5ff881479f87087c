#pragma once

#include <stdexcept>

#include "commnash/game.hpp"

namespace commnash {

inline constexpr double kZeroSumTolerance = 1e-9;

// Equilibrium of the zero-sum game in which the row player maximizes x^T A y.
struct ZeroSumSolution {
  MixedStrategy max_strategy;
  MixedStrategy min_strategy;
  double value = 0.0;
  // max_i e_i^T A y* - min_j x*^T A e_j, clamped at zero.
  double certificate_gap = 0.0;
};

class ZeroSumError : public std::runtime_error {
 public:
  ZeroSumError(const std::string& what, double best_gap)
      : std::runtime_error(what), best_gap_(best_gap) {}
  double best_gap() const { return best_gap_; }

 private:
  double best_gap_;
};

// Solves max_x min_y x^T A y by a dense primal simplex on the shifted matrix.
// Entries must lie in [0,1]. Throws ZeroSumError if the pivot cap (10 * n^2,
// n = max dimension) is hit or the certificate gap exceeds `tolerance`.
ZeroSumSolution solve_zero_sum(const Matrix& a, double tolerance = kZeroSumTolerance);

// Strict comparison: the solution's value is more than `threshold`.
inline bool value_exceeds(const ZeroSumSolution& sol, double threshold) { return sol.value > threshold; }

// Worst-case payoff of the maximizer's mixed strategy over pure replies.
double guaranteed_value(const Matrix& a, const MixedStrategy& max_strategy);
// Best pure payoff available to the maximizer against a mixed reply.
double best_reply_value(const Matrix& a, const MixedStrategy& min_strategy);

}  // namespace commnash
