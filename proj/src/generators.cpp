#include "commnash/generators.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "commnash/random.hpp"

namespace commnash {

std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  // Exact running product; every intermediate value is itself a binomial.
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t acc = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::uint64_t factor = n - k + i;
    if (acc > kMax / factor) return std::numeric_limits<std::size_t>::max();
    acc = acc * factor / i;
    if (acc > cap) return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(acc);
}

std::size_t floor_sqrt(std::size_t n) {
  std::size_t r = 0;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

Matrix MnMatrix::dense() const {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j : supports_[i]) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  }
  return m;
}

Vector MnMatrix::row_payoffs(const Vector& y) const {
  if (static_cast<std::size_t>(y.size()) != n_) throw DimensionError("M_n column strategy has wrong size");
  Vector out(static_cast<Eigen::Index>(rows()));
  for (std::size_t i = 0; i < rows(); ++i) {
    double s = 0.0;
    for (std::size_t j : supports_[i]) s += y[static_cast<Eigen::Index>(j)];
    out[static_cast<Eigen::Index>(i)] = s;
  }
  return out;
}

std::vector<std::size_t> MnMatrix::column_ones() const {
  std::vector<std::size_t> counts(n_, 0);
  for (const auto& s : supports_) {
    for (std::size_t j : s) ++counts[j];
  }
  return counts;
}

MnMatrix make_mn(std::size_t n, std::size_t row_cap) {
  if (n < 1) throw std::invalid_argument("make_mn: n must be >= 1");
  MnMatrix m;
  m.n_ = n;
  m.k_ = floor_sqrt(n);
  const std::size_t count = binomial_capped(n, m.k_, row_cap);
  if (count > row_cap) {
    std::ostringstream os;
    os << "make_mn: binom(" << n << "," << m.k_ << ") exceeds the row cap " << row_cap;
    throw std::length_error(os.str());
  }
  m.supports_.reserve(count);
  std::vector<std::size_t> subset(m.k_);
  for (std::size_t i = 0; i < m.k_; ++i) subset[i] = i;
  // Lexicographic successor of a k-subset of {0..n-1}.
  while (true) {
    m.supports_.push_back(subset);
    std::size_t pos = m.k_;
    while (pos > 0 && subset[pos - 1] == n - m.k_ + pos - 1) --pos;
    if (pos == 0) break;
    ++subset[pos - 1];
    for (std::size_t i = pos; i < m.k_; ++i) subset[i] = subset[i - 1] + 1;
  }
  return m;
}

Matrix make_column_indicator(std::size_t n, std::size_t ell) {
  if (ell >= n) throw std::out_of_range("column indicator index out of range");
  Matrix c = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  c.col(static_cast<Eigen::Index>(ell)).setOnes();
  return c;
}

BimatrixGame make_wsne_oneway_game(int j) {
  if (j != 1 && j != 2) throw std::out_of_range("make_wsne_oneway_game: j must be 1 or 2");
  return BimatrixGame(Matrix::Identity(2, 2), make_column_indicator(2, static_cast<std::size_t>(j - 1)));
}

bool PaddedMnGame::is_mn_row(std::size_t i) const {
  return std::find(mn_rows.begin(), mn_rows.end(), i) != mn_rows.end();
}

bool PaddedMnGame::is_host_col(std::size_t j) const {
  return std::find(host_cols.begin(), host_cols.end(), j) != host_cols.end();
}

namespace {

void require_distinct_in_range(const std::vector<std::size_t>& idx, std::size_t n, const char* what) {
  std::set<std::size_t> seen;
  for (std::size_t i : idx) {
    if (i >= n || !seen.insert(i).second) {
      throw std::invalid_argument(std::string("make_padded_mn: ") + what +
                                  " must be distinct indices below n");
    }
  }
}

}  // namespace

PaddedMnGame make_padded_mn(std::size_t n, const std::vector<std::size_t>& host_rows,
                            const std::vector<std::size_t>& host_cols) {
  require_distinct_in_range(host_rows, n, "host rows");
  require_distinct_in_range(host_cols, n, "host columns");
  if (host_cols.empty()) throw std::invalid_argument("make_padded_mn: need at least one host column");

  PaddedMnGame g;
  g.n = n;
  g.embedded = make_mn(host_cols.size());
  if (g.embedded.rows() > host_rows.size()) {
    std::ostringstream os;
    os << "make_padded_mn: M_" << host_cols.size() << " needs " << g.embedded.rows()
       << " host rows, got " << host_rows.size();
    throw std::invalid_argument(os.str());
  }
  g.mn_rows.assign(host_rows.begin(), host_rows.begin() + static_cast<std::ptrdiff_t>(g.embedded.rows()));
  g.host_cols = host_cols;

  g.R = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < g.mn_rows.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(g.mn_rows[r]);
    g.R.row(row).setOnes();
    for (std::size_t c : host_cols) g.R(row, static_cast<Eigen::Index>(c)) = 0.0;
    for (std::size_t c : g.embedded.row_support(r)) g.R(row, static_cast<Eigen::Index>(host_cols[c])) = 1.0;
  }
  return g;
}

Vector column_hit_probabilities(const MnMatrix& m, const MixedStrategy& x) {
  if (x.size() != m.rows()) throw DimensionError("row strategy does not match M_n row count");
  Vector phi = Vector::Zero(static_cast<Eigen::Index>(m.n()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j : m.row_support(i)) phi[static_cast<Eigen::Index>(j)] += x[i];
  }
  return phi;
}

WorstColumn lemma1_worst_column(const MnMatrix& m, const MixedStrategy& x) {
  const Vector phi = column_hit_probabilities(m, x);
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < phi.size(); ++j) {
    if (phi[j] < phi[best]) best = j;
  }
  return {static_cast<std::size_t>(best), phi[best]};
}

BimatrixGame random_game(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_game: n must be >= 1");
  Rng rng(seed);
  const auto dim = static_cast<Eigen::Index>(n);
  Matrix r(dim, dim);
  Matrix c(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) r(i, j) = uniform01(rng);
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) c(i, j) = uniform01(rng);
  }
  return BimatrixGame(std::move(r), std::move(c));
}

double rect_row_regret(const Matrix& r, const Vector& x, const Vector& y) {
  if (x.size() != r.rows() || y.size() != r.cols()) throw DimensionError("rect_row_regret: size mismatch");
  const Vector values = r * y;
  return values.maxCoeff() - x.dot(values);
}

double mn_row_regret(const MnMatrix& m, const Vector& x, const Vector& y) {
  if (static_cast<std::size_t>(x.size()) != m.rows()) throw DimensionError("mn_row_regret: size mismatch");
  const Vector values = m.row_payoffs(y);
  return values.maxCoeff() - x.dot(values);
}

std::string FamilySpec::to_string() const {
  std::string s = name;
  char sep = ':';
  for (const auto& [k, v] : params) {
    s += sep + k + "=" + std::to_string(v);
    sep = ',';
  }
  return s;
}

FamilySpec parse_family(const std::string& text) {
  FamilySpec spec;
  const auto colon = text.find(':');
  spec.name = text.substr(0, colon);
  static const std::set<std::string> kKnown = {"random", "indicator", "wsne2x2", "mn", "padded"};
  if (!kKnown.count(spec.name)) throw std::invalid_argument("unknown game family '" + spec.name + "'");
  if (colon == std::string::npos) return spec;

  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("family parameter '" + item + "' is not key=value");
    }
    try {
      spec.params[item.substr(0, eq)] = std::stoll(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("family parameter '" + item + "' is not an integer");
    }
  }
  return spec;
}

namespace {

long long param_or(const FamilySpec& f, const std::string& key, long long fallback) {
  const auto it = f.params.find(key);
  return it == f.params.end() ? fallback : it->second;
}

std::size_t checked_index(long long v, std::size_t n, const char* what) {
  if (v < 0 || static_cast<std::size_t>(v) >= n) {
    throw std::out_of_range(std::string(what) + " out of range for this game size");
  }
  return static_cast<std::size_t>(v);
}

std::size_t default_inner(std::size_t n) {
  std::size_t best = 1;
  for (std::size_t inner = 1; inner <= n; ++inner) {
    if (binomial_capped(inner, floor_sqrt(inner), n) <= n) best = inner;
  }
  return best;
}

std::vector<std::size_t> first_indices(std::size_t count) {
  std::vector<std::size_t> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = i;
  return v;
}

}  // namespace

std::size_t family_game_size(const FamilySpec& family, std::size_t n) {
  if (family.name == "wsne2x2") return 2;
  if (family.name == "mn") {
    const std::size_t rows = binomial_capped(n, floor_sqrt(n), kDefaultRowCap);
    if (rows > kDefaultRowCap) throw std::length_error("mn family: game exceeds the row cap");
    return rows;
  }
  return n;
}

BimatrixGame make_family_game(const FamilySpec& family, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("game size must be >= 1");
  if (family.name == "random") return random_game(n, seed);
  if (family.name == "indicator") {
    const std::size_t ell = checked_index(param_or(family, "ell", static_cast<long long>(seed % n)), n, "ell");
    return BimatrixGame(Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)),
                        make_column_indicator(n, ell));
  }
  if (family.name == "wsne2x2") {
    return make_wsne_oneway_game(static_cast<int>(param_or(family, "j", 1 + static_cast<long long>(seed % 2))));
  }
  if (family.name == "mn") {
    const std::size_t dim = family_game_size(family, n);
    const PaddedMnGame padded = make_padded_mn(dim, first_indices(dim), first_indices(n));
    const std::size_t ell = checked_index(param_or(family, "ell", static_cast<long long>(seed % dim)), dim, "ell");
    return BimatrixGame(padded.R, make_column_indicator(dim, ell));
  }
  if (family.name == "padded") {
    const long long inner_param = param_or(family, "inner", static_cast<long long>(default_inner(n)));
    if (inner_param < 1 || static_cast<std::size_t>(inner_param) > n) {
      throw std::out_of_range("padded family: inner must lie in [1, n]");
    }
    const auto inner = static_cast<std::size_t>(inner_param);
    const std::size_t host_rows = binomial_capped(inner, floor_sqrt(inner), n);
    if (host_rows > n) throw std::invalid_argument("padded family: embedded M_n' does not fit");
    const PaddedMnGame padded = make_padded_mn(n, first_indices(host_rows), first_indices(inner));
    const std::size_t ell = checked_index(param_or(family, "ell", static_cast<long long>(seed % n)), n, "ell");
    return BimatrixGame(padded.R, make_column_indicator(n, ell));
  }
  throw std::invalid_argument("unknown game family '" + family.name + "'");
}

}  // namespace commnash
