// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commnash/generators.hpp"
#include "commnash/harness.hpp"
#include "commnash/protocols.hpp"
#include "commnash/zero_sum.hpp"
#include "support/oracles.hpp"

using namespace commnash;

namespace {

constexpr double kTau = kZeroSumTolerance;

using GamePtr = std::shared_ptr<const BimatrixGame>;

struct Recorded {
  GamePtr game;
  std::string protocol;
  ChannelPolicy policy;
  Seeds seeds;
  ProtocolParams params;
  Transcript transcript;
};

std::vector<Recorded> recorded;

struct Result {
  bool pass = true;
  std::ostringstream detail;
  std::string first_failure;

  void fail(const std::string& why) {
    if (pass) first_failure = why;
    pass = false;
  }
};

oracle::Regret oracle_regret(const BimatrixGame& g, const StrategyProfile& p) {
  return oracle::regret(oracle::to_rows(g.R()), oracle::to_rows(g.C()), oracle::to_vec(p.row.probs()),
                        oracle::to_vec(p.col.probs()));
}

std::string where(const std::string& family, std::size_t n, std::uint64_t seed) {
  return family + " n=" + std::to_string(n) + " seed=" + std::to_string(seed);
}

struct Instance {
  std::string family;
  std::size_t n;
  std::uint64_t seed;
  GamePtr game;
};

// 1000 random games with n in [2, 32], then every family at n <= 16.
std::vector<Instance> small_instances() {
  std::vector<Instance> out;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const std::size_t n = 2 + s % 31;
    out.push_back({"random", n, s, std::make_shared<const BimatrixGame>(random_game(n, s))});
  }
  for (const char* f : {"indicator", "padded", "mn", "wsne2x2", "random"}) {
    const FamilySpec spec = parse_family(f);
    for (std::size_t n = 1; n <= 16; ++n) {
      for (std::uint64_t s = 0; s < 2; ++s) {
        out.push_back({f, n, s, std::make_shared<const BimatrixGame>(make_family_game(spec, n, s))});
      }
    }
  }
  return out;
}

const std::vector<Instance>& small_set() {
  static const std::vector<Instance> set = small_instances();
  return set;
}

ProtocolOutcome run_and_record(const GamePtr& g, std::string_view id, std::uint64_t seed,
                               const ProtocolParams& params) {
  const ChannelPolicy policy = default_policy(id);
  const Seeds seeds = player_seeds(seed);
  ProtocolOutcome out = run_protocol(*g, id, policy, seeds, params);
  recorded.push_back({g, std::string(id), policy, seeds, params, out.transcript});
  return out;
}

void criterion_no_comm(Result& r) {
  double worst = 0.0;
  for (const Instance& in : small_set()) {
    const ProtocolOutcome o = run_and_record(in.game, protocol_id::kNoComm, in.seed, {});
    const double eps = oracle_regret(*in.game, o.profile).ne;
    worst = std::max(worst, eps);
    if (eps > 0.75 + 1e-9) r.fail(where(in.family, in.n, in.seed) + " eps_ne=" + std::to_string(eps));
    if (o.transcript.bits_total() != 0) r.fail(where(in.family, in.n, in.seed) + " sent bits");
  }
  r.detail << small_set().size() << " games, max eps_ne " << worst << " <= 0.75, 0 bits";
}

void criterion_dmp(Result& r) {
  double worst = 0.0;
  for (const Instance& in : small_set()) {
    const ProtocolOutcome o = run_and_record(in.game, protocol_id::kDmpOneWay, in.seed, {});
    const double eps = oracle_regret(*in.game, o.profile).ne;
    worst = std::max(worst, eps);
    const std::size_t n = in.game->n();
    const auto expected_bits = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n))));
    if (eps > 0.5 + 1e-9) r.fail(where(in.family, in.n, in.seed) + " eps_ne=" + std::to_string(eps));
    if (o.transcript.bits_col_to_row != expected_bits || o.transcript.bits_row_to_col != 0) {
      r.fail(where(in.family, in.n, in.seed) + " wrong bit counts");
    }
  }
  r.detail << small_set().size() << " games, max eps_ne " << worst << " <= 0.5, col->row = ceil(log2 n)";
}

void criterion_polylog(Result& r, std::string_view id, bool well_supported) {
  ProtocolParams params;
  params.delta = 0.05;
  const double alpha = well_supported ? kAlphaWsne : kAlphaNe;
  const double bound = alpha + params.delta + 2 * kTau + 1e-6;
  double worst = 0.0;
  std::size_t case1 = 0, case2 = 0;
  // 1000 uniform games, then 500 affinely shifted ones whose zero-sum values
  // straddle both case thresholds.
  std::mt19937_64 shift_gen(17);
  for (std::uint64_t s = 0; s < 1500; ++s) {
    const std::size_t n = 4 + s % 61;
    BimatrixGame base = random_game(n, 90000 + s);
    if (s >= 1000) {
      // Entries a + b u with u uniform, centred on a target value.
      auto affine = [&](const Matrix& m) {
        const double target = std::uniform_real_distribution<double>(0.25, 0.95)(shift_gen);
        const double b = std::uniform_real_distribution<double>(0.1, 0.5)(shift_gen);
        const double a = std::clamp(target - 0.5 * b, 0.0, 1.0 - b);
        return Matrix(a + b * m.array());
      };
      base = BimatrixGame(affine(base.R()), affine(base.C()));
    }
    const auto g = std::make_shared<const BimatrixGame>(std::move(base));
    ProtocolOutcome o;
    try {
      o = run_and_record(g, id, s, params);
    } catch (const std::exception& e) {
      r.fail(where("random", n, s) + ": " + e.what());
      continue;
    }
    const oracle::Regret reg = oracle_regret(*g, o.profile);
    const double eps = well_supported ? reg.wsne : reg.ne;
    worst = std::max(worst, eps);
    if (eps > bound) r.fail(where("random", n, s) + " eps=" + std::to_string(eps));

    const auto w = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n))));
    const double ln_n = std::log(static_cast<double>(n));
    const auto k = static_cast<std::size_t>(std::ceil(ln_n / (params.delta * params.delta)));
    const std::size_t bits = o.transcript.bits_total();
    if (bits > 2 * k * w + 2 * w + 2) r.fail(where("random", n, s) + " bits over bound");
    // Exact per-case schedule: two flags, then 2k indices or k indices plus a reply.
    const bool c1 = o.case_label == "case1";
    (c1 ? case1 : case2)++;
    if (bits != (c1 ? 2 + 2 * k * w : 2 + k * w + w)) r.fail(where("random", n, s) + " unexpected bit count");
  }
  r.detail << "1500 games, max " << (well_supported ? "eps_wsne " : "eps_ne ") << worst << " <= " << bound
           << " (" << case1 << " case1, " << case2 << " case2), exact bits";
}

void criterion_zero_sum(Result& r) {
  double worst_gap = 0.0;
  for (std::uint64_t s = 0; s < 500; ++s) {
    const std::size_t n = 1 + s % 64;
    const Matrix a = random_game(n, 40000 + s).R();
    const ZeroSumSolution sol = solve_zero_sum(a);
    const oracle::Mat rows = oracle::to_rows(a);
    const double gap = oracle::max_of(oracle::row_values(rows, oracle::to_vec(sol.min_strategy.probs()))) -
                       oracle::min_of(oracle::col_values(rows, oracle::to_vec(sol.max_strategy.probs())));
    worst_gap = std::max(worst_gap, gap);
    if (gap > 2 * kTau) r.fail("n=" + std::to_string(n) + " gap " + std::to_string(gap));
  }
  double worst_diff = 0.0;
  for (std::uint64_t s = 0; s < 400; ++s) {
    const std::size_t n = 2 + s % 2;
    const Matrix a = random_game(n, 60000 + s).C();
    const double diff = std::abs(solve_zero_sum(a).value - oracle::zero_sum_value(oracle::to_rows(a)));
    worst_diff = std::max(worst_diff, diff);
    if (!(diff <= 1e-7)) r.fail("small instance value mismatch");
  }
  const double pennies = solve_zero_sum(Matrix::Identity(2, 2)).value;
  if (std::abs(pennies - 0.5) > 1e-9) r.fail("matching pennies value " + std::to_string(pennies));
  r.detail << "500 matrices max gap " << worst_gap << "; 400 small games max |v - oracle| " << worst_diff
           << "; pennies " << pennies;
}

// Column strategy with mass p on `m`, `off` spread over `others`, and the
// remainder spread over the other host columns.
Vector spread(std::size_t n, std::size_t m, double p, const std::vector<std::size_t>& hosts,
              const std::vector<std::size_t>& others, double off, std::mt19937_64& gen) {
  Vector y = Vector::Zero(static_cast<Eigen::Index>(n));
  y[static_cast<Eigen::Index>(m)] = p;
  std::vector<std::size_t> rest;
  for (std::size_t j : hosts)
    if (j != m) rest.push_back(j);
  const oracle::Vec a = oracle::random_simplex(rest.size(), gen);
  for (std::size_t t = 0; t < rest.size(); ++t) y[static_cast<Eigen::Index>(rest[t])] = (1 - p - off) * a[t];
  if (!others.empty()) {
    const oracle::Vec b = oracle::random_simplex(others.size(), gen);
    for (std::size_t t = 0; t < others.size(); ++t) y[static_cast<Eigen::Index>(others[t])] += off * b[t];
  }
  return y;
}

void criterion_mn_worst_column(Result& r) {
  std::mt19937_64 gen(2024);
  double tightest = 1.0;
  std::size_t trials = 0;
  for (std::size_t n : {9u, 16u, 25u}) {
    const MnMatrix m = make_mn(n);
    const double k = static_cast<double>(m.k());
    std::vector<std::size_t> cols(n);
    for (std::size_t j = 0; j < n; ++j) cols[j] = j;
    for (int t = 0; t < 100; ++t) {
      const oracle::Vec xv = oracle::random_simplex(m.rows(), gen);
      const MixedStrategy x(xv);
      const std::size_t worst = lemma1_worst_column(m, x).column;
      for (double p : {0.3, 0.5, 0.8}) {
        const Vector y = spread(n, worst, p, cols, {}, 0.0, gen);
        // Brute-force best response over the explicit rows.
        double best = 0.0, achieved = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
          double v = 0.0;
          for (std::size_t j : m.row_support(i)) v += y[static_cast<Eigen::Index>(j)];
          best = std::max(best, v);
          achieved += xv[i] * v;
        }
        const double bound = (1 - k / n) * (p - (1 - p) / k);
        tightest = std::min(tightest, best - achieved - bound);
        ++trials;
        if (best - achieved < bound - 1e-9) r.fail("n=" + std::to_string(n) + " p=" + std::to_string(p));
      }
    }
  }
  r.detail << trials << " trials, min slack over (1-k/n)(p-(1-p)/k) " << tightest;
}

void criterion_padded_mn(Result& r) {
  const std::size_t n = 20, inner = 4;
  std::vector<std::size_t> host_rows(6), host_cols(inner), other_cols;
  for (std::size_t i = 0; i < 6; ++i) host_rows[i] = i;
  for (std::size_t j = 0; j < inner; ++j) host_cols[j] = j;
  for (std::size_t j = inner; j < n; ++j) other_cols.push_back(j);
  const PaddedMnGame g = make_padded_mn(n, host_rows, host_cols);
  const oracle::Mat rows = oracle::to_rows(g.R);
  const double k = static_cast<double>(g.embedded.k());

  std::mt19937_64 gen(7);
  double tightest = 1.0;
  std::size_t trials = 0;
  for (double pr : {0.05, 0.1, 0.2}) {
    for (double pc : {0.05, 0.1, 0.2}) {
      for (double p : {0.3, 0.5}) {
        for (int t = 0; t < 50; ++t) {
          const oracle::Vec inside = oracle::random_simplex(6, gen);
          const oracle::Vec outside = oracle::random_simplex(n - 6, gen);
          oracle::Vec x(n);
          for (std::size_t i = 0; i < 6; ++i) x[i] = (1 - pr) * inside[i];
          for (std::size_t i = 6; i < n; ++i) x[i] = pr * outside[i - 6];
          const std::size_t ell = lemma1_worst_column(g.embedded, MixedStrategy(inside)).column;
          const oracle::Vec y = oracle::to_vec(spread(n, host_cols[ell], p, host_cols, other_cols, pc, gen));
          const double regret = oracle::max_of(oracle::row_values(rows, y)) - oracle::bilinear(rows, x, y);
          const double bound = p - 1 / k + pr * pc;
          tightest = std::min(tightest, regret - bound);
          ++trials;
          if (regret < bound - 1e-9) r.fail("p=" + std::to_string(p) + " pr=" + std::to_string(pr));
        }
      }
    }
  }
  r.detail << trials << " trials at n=20, n'=4, min slack over p-1/k'+pr*pc " << tightest;
}

void criterion_wsne_oneway(Result& r) {
  std::mt19937_64 gen(4);
  const BimatrixGame games[2] = {make_wsne_oneway_game(1), make_wsne_oneway_game(2)};
  for (int t = 0; t < 1000; ++t) {
    const MixedStrategy x(oracle::random_simplex(2, gen));
    double worst = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
      const StrategyProfile p{x, MixedStrategy::pure(2, j)};
      const double eps = regret_report(games[j], p).eps_wsne;
      if (eps != oracle_regret(games[j], p).wsne) r.fail("eps_wsne disagrees with the oracle");
      worst = std::max(worst, eps);
    }
    if (worst != 1.0) r.fail("max_j eps_wsne = " + std::to_string(worst));
  }
  r.detail << "1000 row strategies, max_j eps_wsne == 1 in every trial";
}

void criterion_sampling(Result& r) {
  const std::size_t n = 100;
  const double delta = 0.1;
  const std::size_t k = sample_size(n, delta);
  const BimatrixGame g = random_game(n, 31337);
  const ZeroSumSolution sol = solve_zero_sum(g.R());
  const oracle::Mat rows = oracle::to_rows(g.R());
  Rng rng(mix_seed(99));
  const int attempts = 10000;

  std::size_t accepted_guarantee = 0, accepted_cap = 0, bad = 0;
  for (int t = 0; t < attempts; ++t) {
    const MixedStrategy xs = MixedStrategy::empirical(n, draw_sample(sol.max_strategy, k, rng));
    if (sample_accepted(g.R(), xs, {SampleDirection::kGuarantee, sol.value - delta})) {
      ++accepted_guarantee;
      if (oracle::min_of(oracle::col_values(rows, oracle::to_vec(xs.probs()))) < sol.value - delta) ++bad;
    }
    const MixedStrategy ys = MixedStrategy::empirical(n, draw_sample(sol.min_strategy, k, rng));
    if (sample_accepted(g.R(), ys, {SampleDirection::kCap, sol.value + delta})) {
      ++accepted_cap;
      if (oracle::max_of(oracle::row_values(rows, oracle::to_vec(ys.probs()))) > sol.value + delta) ++bad;
    }
  }
  const double floor = 1.0 - 10.0 / static_cast<double>(n * n);
  const double rate_g = static_cast<double>(accepted_guarantee) / attempts;
  const double rate_c = static_cast<double>(accepted_cap) / attempts;
  if (rate_g < floor || rate_c < floor) r.fail("acceptance rate below " + std::to_string(floor));
  if (bad > 0) r.fail(std::to_string(bad) + " accepted samples fail the recomputed check");
  r.detail << "k=" << k << ", acceptance " << rate_g << " (guarantee) and " << rate_c << " (cap) >= " << floor
           << ", " << bad << " accepted samples fail recomputation";
}

void criterion_replay(Result& r) {
  std::size_t mismatches = 0;
  for (const Recorded& rec : recorded) {
    if (!replay(rec.transcript, *rec.game, find_protocol(rec.protocol), rec.policy, rec.seeds, rec.params)) {
      ++mismatches;
    }
  }
  if (recorded.empty()) r.fail("nothing recorded");
  if (mismatches > 0) r.fail(std::to_string(mismatches) + " transcripts differ on replay");
  r.detail << recorded.size() << " transcripts replayed, " << mismatches << " mismatches";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Result&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "no-communication bound", criterion_no_comm},
      {2, "one-way DMP bound", criterion_dmp},
      {3, "polylog eps-NE bound", [](Result& r) { criterion_polylog(r, protocol_id::kPolylogNe, false); }},
      {4, "polylog WSNE bound", [](Result& r) { criterion_polylog(r, protocol_id::kPolylogWsne, true); }},
      {5, "zero-sum certificate", criterion_zero_sum},
      {6, "worst-column regret on M_n", criterion_mn_worst_column},
      {7, "padded M_n regret", criterion_padded_mn},
      {8, "one-way WSNE impossibility", criterion_wsne_oneway},
      {9, "sampling subprotocol", criterion_sampling},
      {10, "deterministic replay", criterion_replay},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Result r;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(r);
    } catch (const std::exception& e) {
      r.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %2d  %-28s %s (%.2fs)\n", r.pass ? "PASS" : "FAIL", c.id, c.name,
                r.detail.str().c_str(), secs);
    if (!r.pass) {
      std::printf("       first failure: %s\n", r.first_failure.c_str());
      ++failures;
    }
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
