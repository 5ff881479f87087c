#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "commnash/game.hpp"

namespace commnash {

inline constexpr std::size_t kDefaultRowCap = 1'000'000;

// n choose k, or SIZE_MAX when the result exceeds `cap`.
std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap);

// floor(sqrt(n)) for n >= 1.
std::size_t floor_sqrt(std::size_t n);

// The 0/1 matrix with n columns and one row per k-subset of the columns,
// k = floor(sqrt(n)), rows in lexicographic order of their subsets.
class MnMatrix {
 public:
  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t rows() const { return supports_.size(); }
  // Sorted column indices holding a 1 in the given row.
  const std::vector<std::size_t>& row_support(std::size_t row) const { return supports_[row]; }

  Matrix dense() const;
  // Payoff of every row against a column strategy: sum of y over its support.
  Vector row_payoffs(const Vector& y) const;
  std::vector<std::size_t> column_ones() const;

 private:
  friend MnMatrix make_mn(std::size_t n, std::size_t row_cap);
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<std::vector<std::size_t>> supports_;
};

MnMatrix make_mn(std::size_t n, std::size_t row_cap = kDefaultRowCap);

// n x n matrix with ones in column `ell` (0-based) and zeros elsewhere.
Matrix make_column_indicator(std::size_t n, std::size_t ell);

// 2 x 2 game (I, C^j) for j in {1, 2} (1-based as in the column name).
BimatrixGame make_wsne_oneway_game(int j);

// Row payoff matrix with an embedded M_{n'}: the first binom(n', k') host rows
// carry M_{n'} on the host columns and pay 1 on every other column; all other
// rows pay 0.
struct PaddedMnGame {
  std::size_t n = 0;
  MnMatrix embedded;
  std::vector<std::size_t> mn_rows;  // rows intersecting the embedded M_{n'}
  std::vector<std::size_t> host_cols;
  Matrix R;

  bool is_mn_row(std::size_t i) const;
  bool is_host_col(std::size_t j) const;
};

PaddedMnGame make_padded_mn(std::size_t n, const std::vector<std::size_t>& host_rows,
                            const std::vector<std::size_t>& host_cols);

struct WorstColumn {
  std::size_t column = 0;
  double phi = 0.0;
};

// Phi(j): probability that a row drawn from x has a 1 in column j.
Vector column_hit_probabilities(const MnMatrix& m, const MixedStrategy& x);
// Lowest-index argmin of Phi.
WorstColumn lemma1_worst_column(const MnMatrix& m, const MixedStrategy& x);

BimatrixGame random_game(std::size_t n, std::uint64_t seed);

// Row regret max_i (R y)_i - x^T R y for a possibly rectangular R.
double rect_row_regret(const Matrix& r, const Vector& x, const Vector& y);
double mn_row_regret(const MnMatrix& m, const Vector& x, const Vector& y);

// Named game families addressable from sweeps and the CLI, written as
// "name" or "name:key=value,key=value".
//   random                 uniform i.i.d. entries
//   indicator[:ell=L]      (I_n, C^L); L defaults to seed mod n
//   wsne2x2[:j=J]          (I_2, C^J); J defaults to 1 + seed mod 2; n ignored
//   mn[:ell=L]             square game of size binom(n, floor(sqrt n)): R is
//                          M_n padded with ones, C = C^L
//   padded[:inner=N']      n x n game: R = padded M_{n'}, C = C^L with L from the seed
struct FamilySpec {
  std::string name;
  std::map<std::string, long long> params;

  std::string to_string() const;
};

FamilySpec parse_family(const std::string& text);
BimatrixGame make_family_game(const FamilySpec& family, std::size_t n, std::uint64_t seed);
// Dimension of the game make_family_game would build.
std::size_t family_game_size(const FamilySpec& family, std::size_t n);

}  // namespace commnash
