#include <random>

#include "commnash/generators.hpp"
#include "commnash/zero_sum.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace commnash;

namespace {

void check_certificate(const Matrix& a, const ZeroSumSolution& s, double tau) {
  CHECK(best_reply_value(a, s.min_strategy) <= s.value + tau);
  CHECK(guaranteed_value(a, s.max_strategy) >= s.value - tau);
  CHECK(s.certificate_gap <= 2 * tau);
}

}  // namespace

TEST_CASE("matching pennies") {
  const Matrix a = Matrix::Identity(2, 2);
  const ZeroSumSolution s = solve_zero_sum(a);
  CHECK(s.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.max_strategy[0] == doctest::Approx(0.5));
  CHECK(s.min_strategy[1] == doctest::Approx(0.5));
  CHECK(s.value == doctest::Approx(oracle::zero_sum_value_2x2(1, 0, 0, 1)));
}

TEST_CASE("dominant row") {
  Matrix a(2, 2);
  a << 1, 1, 0, 0;
  const ZeroSumSolution s = solve_zero_sum(a);
  CHECK(s.value == doctest::Approx(1.0));
  CHECK(s.max_strategy[0] == doctest::Approx(1.0));
}

TEST_CASE("rescaled rock paper scissors") {
  Matrix a(3, 3);
  a << 0.5, 0.0, 1.0,
       1.0, 0.5, 0.0,
       0.0, 1.0, 0.5;
  const ZeroSumSolution s = solve_zero_sum(a);
  CHECK(s.value == doctest::Approx(0.5));
  CHECK(s.value == doctest::Approx(oracle::zero_sum_value(oracle::to_rows(a))));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(s.max_strategy[i] == doctest::Approx(1.0 / 3));
    CHECK(s.min_strategy[i] == doctest::Approx(1.0 / 3));
  }
}

TEST_CASE("constant and degenerate matrices") {
  const ZeroSumSolution c = solve_zero_sum(Matrix::Constant(4, 4, 0.3));
  CHECK(c.value == doctest::Approx(0.3));
  CHECK(solve_zero_sum(Matrix::Zero(5, 5)).value == doctest::Approx(0.0));
  CHECK(solve_zero_sum(Matrix::Ones(5, 5)).value == doctest::Approx(1.0));
  // Many tied rows and columns.
  Matrix d = Matrix::Zero(6, 6);
  d.col(2).setOnes();
  d.row(4).setOnes();
  const ZeroSumSolution s = solve_zero_sum(d);
  CHECK(s.value == doctest::Approx(1.0));
  check_certificate(d, s, kZeroSumTolerance);
}

TEST_CASE("value_exceeds is strict") {
  ZeroSumSolution s;
  s.value = 0.3;
  CHECK_FALSE(value_exceeds(s, 0.438));
  s.value = 1.0;
  CHECK(value_exceeds(s, 0.438));
  s.value = 0.438;
  CHECK_FALSE(value_exceeds(s, 0.438));
}

TEST_CASE("small games match support enumeration") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 2 + seed % 2;
    const Matrix a = random_game(n, seed).R();
    const ZeroSumSolution s = solve_zero_sum(a);
    CHECK(s.value == doctest::Approx(oracle::zero_sum_value(oracle::to_rows(a))).epsilon(1e-7));
    if (n == 2) CHECK(s.value == doctest::Approx(oracle::zero_sum_value_2x2(a(0, 0), a(0, 1), a(1, 0), a(1, 1))));
  }
}

TEST_CASE("certificates on random matrices and against random opponents") {
  std::mt19937_64 gen(9);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 1 + (seed * 7) % 40;
    const Matrix a = random_game(n, 500 + seed).C();
    const ZeroSumSolution s = solve_zero_sum(a);
    check_certificate(a, s, kZeroSumTolerance);
    const oracle::Mat rows = oracle::to_rows(a);
    const oracle::Vec x = oracle::to_vec(s.max_strategy.probs());
    for (int t = 0; t < 100; ++t) {
      const oracle::Vec y = oracle::random_simplex(n, gen);
      CHECK(oracle::bilinear(rows, x, y) >= s.value - kZeroSumTolerance);
    }
  }
}

TEST_CASE("value is affine in the payoffs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix a = random_game(8, seed).R();
    const double v = solve_zero_sum(a).value;
    CHECK(solve_zero_sum(0.5 * a.array() + 0.25).value == doctest::Approx(0.5 * v + 0.25).epsilon(1e-9));
    // Transposed negation swaps roles.
    CHECK(solve_zero_sum(1.0 - a.transpose().array()).value == doctest::Approx(1.0 - v).epsilon(1e-9));
  }
}

TEST_CASE("rectangular matrices") {
  Matrix a(2, 3);
  a << 1, 0, 0.5,
       0, 1, 0.5;
  const ZeroSumSolution s = solve_zero_sum(a);
  CHECK(s.value == doctest::Approx(0.5));
  check_certificate(a, s, kZeroSumTolerance);
}
