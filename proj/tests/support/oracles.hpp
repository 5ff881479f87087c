#pragma once

// Plain-loop reference computations used to cross-check the library. Nothing
// here calls into commnash beyond its value types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = std::vector<std::vector<double>>;
using Vec = std::vector<double>;

inline Mat to_rows(const Eigen::MatrixXd& m) {
  Mat out(static_cast<std::size_t>(m.rows()), Vec(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

inline Vec to_vec(const Eigen::VectorXd& v) { return Vec(v.data(), v.data() + v.size()); }

inline double bilinear(const Mat& m, const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) s += x[i] * m[i][j] * y[j];
  return s;
}

// Payoff of every row against y.
inline Vec row_values(const Mat& m, const Vec& y) {
  Vec out(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) out[i] += m[i][j] * y[j];
  return out;
}

// Payoff of every column against x.
inline Vec col_values(const Mat& m, const Vec& x) {
  Vec out(m.empty() ? 0 : m[0].size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) out[j] += x[i] * m[i][j];
  return out;
}

inline double max_of(const Vec& v) { return *std::max_element(v.begin(), v.end()); }
inline double min_of(const Vec& v) { return *std::min_element(v.begin(), v.end()); }

struct Regret {
  double row = 0.0;
  double col = 0.0;
  double ne = 0.0;
  double wsne = 0.0;
};

// Regrets straight from the definitions: best pure value minus achieved
// value, and the worst gap of any strategy played with probability > 1e-9.
inline Regret regret(const Mat& r, const Mat& c, const Vec& x, const Vec& y) {
  const Vec rv = row_values(r, y);
  const Vec cv = col_values(c, x);
  Regret out;
  out.row = max_of(rv) - bilinear(r, x, y);
  out.col = max_of(cv) - bilinear(c, x, y);
  out.ne = std::max(out.row, out.col);
  double ws = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 1e-9) ws = std::max(ws, max_of(rv) - rv[i]);
  for (std::size_t j = 0; j < y.size(); ++j)
    if (y[j] > 1e-9) ws = std::max(ws, max_of(cv) - cv[j]);
  out.wsne = ws;
  return out;
}

// Solves the square linear system a z = b by Gaussian elimination with partial
// pivoting. Returns nothing when the system is singular.
inline std::optional<Vec> solve_linear(Mat a, Vec b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-12) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  Vec z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = b[i] / a[i][i];
  return z;
}

// Value of the zero-sum game max_x min_y x^T A y by support enumeration.
// For every pair of equal-size supports, solve the indifference equations
// and keep the candidate whose strategies are mutual best replies.
inline double zero_sum_value(const Mat& a) {
  const std::size_t m = a.size();
  const std::size_t n = a[0].size();
  double best = std::nan("");
  for (std::uint32_t rs = 1; rs < (1u << m); ++rs) {
    for (std::uint32_t cs = 1; cs < (1u << n); ++cs) {
      std::vector<std::size_t> rows, cols;
      for (std::size_t i = 0; i < m; ++i)
        if (rs & (1u << i)) rows.push_back(i);
      for (std::size_t j = 0; j < n; ++j)
        if (cs & (1u << j)) cols.push_back(j);
      if (rows.size() != cols.size()) continue;
      const std::size_t s = rows.size();
      // Unknowns: x over rows then v. Equations: column indifference, sum = 1.
      Mat ax(s + 1, Vec(s + 1, 0.0));
      Vec bx(s + 1, 0.0);
      for (std::size_t t = 0; t < s; ++t) {
        for (std::size_t u = 0; u < s; ++u) ax[t][u] = a[rows[u]][cols[t]];
        ax[t][s] = -1.0;
      }
      for (std::size_t u = 0; u < s; ++u) ax[s][u] = 1.0;
      bx[s] = 1.0;
      Mat ay(s + 1, Vec(s + 1, 0.0));
      Vec by(s + 1, 0.0);
      for (std::size_t t = 0; t < s; ++t) {
        for (std::size_t u = 0; u < s; ++u) ay[t][u] = a[rows[t]][cols[u]];
        ay[t][s] = -1.0;
      }
      for (std::size_t u = 0; u < s; ++u) ay[s][u] = 1.0;
      by[s] = 1.0;
      const auto zx = solve_linear(ax, bx);
      const auto zy = solve_linear(ay, by);
      if (!zx || !zy) continue;
      Vec x(m, 0.0), y(n, 0.0);
      bool ok = true;
      for (std::size_t u = 0; u < s; ++u) {
        if ((*zx)[u] < -1e-12 || (*zy)[u] < -1e-12) ok = false;
        x[rows[u]] = std::max(0.0, (*zx)[u]);
        y[cols[u]] = std::max(0.0, (*zy)[u]);
      }
      if (!ok) continue;
      const double lo = min_of(col_values(a, x));
      const double hi = max_of(row_values(a, y));
      if (hi - lo > 1e-9) continue;
      best = 0.5 * (lo + hi);
      return best;
    }
  }
  return best;
}

// Closed form for 2 x 2 zero-sum games: pure saddle if one exists, otherwise
// the mixed indifference value.
inline double zero_sum_value_2x2(double a, double b, double c, double d) {
  const double maximin = std::max(std::min(a, b), std::min(c, d));
  const double minimax = std::min(std::max(a, c), std::max(b, d));
  if (maximin == minimax) return maximin;
  return (a * d - b * c) / (a + d - b - c);
}

inline std::size_t choose(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Random probability vector with i.i.d. exponential weights.
template <class Gen>
Vec random_simplex(std::size_t n, Gen& gen) {
  std::exponential_distribution<double> e(1.0);
  Vec v(n);
  double s = 0.0;
  for (auto& x : v) s += (x = e(gen));
  for (auto& x : v) x /= s;
  return v;
}

}  // namespace oracle
