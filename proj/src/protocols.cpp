#include "commnash/protocols.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace commnash {

Matrix oriented_matrix(const PlayerView& view) {
  return view.role == Role::kRow ? view.own_matrix : Matrix(view.own_matrix.transpose());
}

std::size_t sample_size(std::size_t n, double delta) {
  if (n == 0) throw std::invalid_argument("sample_size: n must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("sample_size: delta must be positive");
  const double k = std::ceil(std::log(static_cast<double>(n)) / (delta * delta));
  return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

double sample_statistic(const Matrix& oriented, const MixedStrategy& strategy, SampleDirection direction) {
  if (direction == SampleDirection::kGuarantee) return guaranteed_value(oriented, strategy);
  return best_reply_value(oriented, strategy);
}

bool sample_accepted(const Matrix& oriented, const MixedStrategy& empirical, const SampleCheck& check) {
  const double stat = sample_statistic(oriented, empirical, check.direction);
  return check.direction == SampleDirection::kGuarantee ? stat >= check.bound : stat <= check.bound;
}

std::vector<std::size_t> draw_sample(const MixedStrategy& source, std::size_t k, Rng& rng) {
  const std::vector<double> cdf = cumulative_weights(source.to_vector());
  std::vector<std::size_t> draws(k);
  for (auto& d : draws) d = draw_index(cdf, rng);
  return draws;
}

SampledStrategy sample_and_send(const MixedStrategy& source, const Matrix& oriented,
                                const SampleCheck& check, const ProtocolParams& params, Rng& rng) {
  const std::size_t n = source.size();
  const auto expected = static_cast<std::size_t>(
      check.direction == SampleDirection::kGuarantee ? oriented.rows() : oriented.cols());
  if (n != expected) throw DimensionError("sampled strategy does not match the payoff matrix");

  const std::size_t k = sample_size(n, params.delta);
  SampledStrategy out;
  out.bits = k * index_bits(n);
  for (out.attempts = 1; out.attempts <= params.resample_cap; ++out.attempts) {
    out.draws = draw_sample(source, k, rng);
    out.empirical = MixedStrategy::empirical(n, out.draws);
    if (sample_accepted(oriented, out.empirical, check)) return out;
  }
  std::ostringstream os;
  os << "no sample of size " << k << " passed the check (bound " << check.bound << ") in "
     << params.resample_cap << " attempts";
  throw SamplingError(os.str());
}

ShiftResult drain_lowest(const MixedStrategy& x, const Vector& payoffs, double mass) {
  if (static_cast<std::size_t>(payoffs.size()) != x.size()) throw DimensionError("drain_lowest: size mismatch");
  if (!(mass >= 0.0 && mass <= 1.0)) throw std::invalid_argument("drain_lowest: mass must lie in [0,1]");

  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return payoffs[static_cast<Eigen::Index>(a)] < payoffs[static_cast<Eigen::Index>(b)];
  });

  Vector p = x.probs();
  double remaining = mass;
  for (std::size_t i : order) {
    if (remaining <= 0.0) break;
    const auto idx = static_cast<Eigen::Index>(i);
    const double take = std::min(p[idx], remaining);
    p[idx] -= take;
    remaining -= take;
  }
  const std::size_t target = argmax_lowest(payoffs);
  const double moved = mass - std::max(remaining, 0.0);
  p[static_cast<Eigen::Index>(target)] += moved;
  return {MixedStrategy(p), moved, target};
}

ShiftResult lift_below_threshold(const MixedStrategy& x, const Vector& payoffs, double alpha) {
  if (static_cast<std::size_t>(payoffs.size()) != x.size()) {
    throw DimensionError("lift_below_threshold: size mismatch");
  }
  const std::size_t target = argmax_lowest(payoffs);
  const double cutoff = payoffs[static_cast<Eigen::Index>(target)] - alpha;
  Vector p = x.probs();
  double moved = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (payoffs[i] < cutoff) {
      moved += p[i];
      p[i] = 0.0;
    }
  }
  p[static_cast<Eigen::Index>(target)] += moved;
  return {MixedStrategy(p), moved, target};
}

double default_alpha(PolylogVariant v) { return v == PolylogVariant::kNash ? kAlphaNe : kAlphaWsne; }

namespace {

MixedStrategy scaled_pair(std::size_t n, std::size_t a, std::size_t b) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(n));
  v[static_cast<Eigen::Index>(a)] += 0.5;
  v[static_cast<Eigen::Index>(b)] += 0.5;
  return MixedStrategy(v);
}

// Each player mixes its first pure strategy with its best reply to the
// opponent's first pure strategy.
class NoCommMachine final : public PlayerMachine {
 public:
  explicit NoCommMachine(const PlayerView& view) : m_(oriented_matrix(view)) {}

  std::vector<BitString> start() override {
    const std::size_t n = static_cast<std::size_t>(m_.rows());
    const std::size_t best = argmax_lowest(m_.col(0));
    output_ = scaled_pair(n, 0, best);
    return {};
  }
  std::vector<BitString> receive(const BitString&) override {
    throw ProtocolError("no-comm player received a message");
  }
  bool done() const override { return output_.size() > 0; }
  MixedStrategy output() const override { return output_; }
  std::string case_label() const override { return "no-comm"; }

 private:
  Matrix m_;
  MixedStrategy output_;
};

// Column best-responds to row 1 and announces it; row mixes row 1 with its
// best reply to the announced column.
class DmpMachine final : public PlayerMachine {
 public:
  explicit DmpMachine(const PlayerView& view) : role_(view.role), m_(oriented_matrix(view)) {}

  std::vector<BitString> start() override {
    const auto n = static_cast<std::size_t>(m_.rows());
    if (role_ == Role::kColumn) {
      const std::size_t j = argmax_lowest(m_.col(0));
      output_ = MixedStrategy::pure(n, j);
      if (index_bits(n) == 0) return {};
      return {encode_indices({j}, n)};
    }
    if (index_bits(n) == 0) finish_row(0);
    return {};
  }

  std::vector<BitString> receive(const BitString& payload) override {
    if (role_ != Role::kRow || done()) throw ProtocolError("unexpected message in dmp-oneway");
    const auto n = static_cast<std::size_t>(m_.rows());
    const std::vector<std::size_t> idx = decode_indices(payload, n);
    if (idx.size() != 1) throw ProtocolError("dmp-oneway expects exactly one column index");
    finish_row(idx.front());
    return {};
  }

  bool done() const override { return output_.size() > 0; }
  MixedStrategy output() const override { return output_; }
  std::string case_label() const override { return "dmp"; }

 private:
  void finish_row(std::size_t j) {
    const std::size_t k = argmax_lowest(m_.col(static_cast<Eigen::Index>(j)));
    output_ = scaled_pair(static_cast<std::size_t>(m_.rows()), 0, k);
  }

  Role role_;
  Matrix m_;
  MixedStrategy output_;
};

// Zero-sum values decide the case with one flag bit each; then either both
// sides exchange sampled punishing strategies (case 1) or the flagged player
// sends its sampled security strategy, receives a pure reply, and shifts mass
// toward its best response (case 2).
class PolylogMachine final : public PlayerMachine {
 public:
  PolylogMachine(const PlayerView& view, const ProtocolParams& params, PolylogVariant variant)
      : role_(view.role),
        m_(oriented_matrix(view)),
        n_(static_cast<std::size_t>(m_.rows())),
        params_(params),
        variant_(variant),
        alpha_(params.alpha.value_or(default_alpha(variant))),
        rng_(view.seed) {}

  std::vector<BitString> start() override {
    if (n_ == 1) {
      finish(MixedStrategy::pure(1, 0));
      label_ = "trivial";
      return {};
    }
    sol_ = solve_zero_sum(m_);
    // Flagging at alpha rather than alpha + delta leaves case 1 a full delta of
    // sampling slack; case 2 still bounds the shifted mass for both variants.
    flagged_ = value_exceeds(sol_, alpha_);
    BitString flag;
    flag.push_back(flagged_);
    state_ = State::kAwaitFlag;
    return {flag};
  }

  std::vector<BitString> receive(const BitString& payload) override {
    switch (state_) {
      case State::kAwaitFlag:
        return on_flag(payload.size() == 1 && payload[0]);
      case State::kAwaitOwnSample:
        finish(MixedStrategy::empirical(n_, decode_indices(payload, n_)));
        return {};
      case State::kAwaitFlaggedSample: {
        const MixedStrategy theirs = MixedStrategy::empirical(n_, decode_indices(payload, n_));
        const std::size_t reply = argmax_lowest(m_ * theirs.probs());
        finish(MixedStrategy::pure(n_, reply));
        return {encode_indices({reply}, n_)};
      }
      case State::kAwaitReply: {
        const std::vector<std::size_t> idx = decode_indices(payload, n_);
        if (idx.size() != 1) throw ProtocolError("expected a single pure reply");
        on_reply(idx.front());
        return {};
      }
      case State::kIdle:
      case State::kDone:
        break;
    }
    throw ProtocolError("unexpected message for the polylog protocol");
  }

  bool done() const override { return state_ == State::kDone; }
  MixedStrategy output() const override { return output_; }
  std::string case_label() const override { return label_; }

 private:
  enum class State { kIdle, kAwaitFlag, kAwaitOwnSample, kAwaitFlaggedSample, kAwaitReply, kDone };

  std::vector<BitString> on_flag(bool their_flag) {
    if (!flagged_ && !their_flag) {
      label_ = "case1";
      // The opponent will play a sample of the strategy that holds our payoff down.
      const SampleCheck check{SampleDirection::kCap, alpha_ + params_.delta};
      const SampledStrategy s = sample_and_send(sol_.min_strategy, m_, check, params_, rng_);
      state_ = State::kAwaitOwnSample;
      return {encode_indices(s.draws, n_)};
    }
    const Role flagged_role = flagged_ && their_flag ? Role::kRow : (flagged_ ? role_ : opponent(role_));
    label_ = std::string("case2-") + to_string(flagged_role);
    if (flagged_role != role_) {
      state_ = State::kAwaitFlaggedSample;
      return {};
    }
    const SampleCheck check{SampleDirection::kGuarantee, sol_.value - params_.delta};
    const SampledStrategy s = sample_and_send(sol_.max_strategy, m_, check, params_, rng_);
    sampled_ = s.empirical;
    state_ = State::kAwaitReply;
    return {encode_indices(s.draws, n_)};
  }

  void on_reply(std::size_t reply) {
    const Vector payoffs = m_.col(static_cast<Eigen::Index>(reply));
    const ShiftResult shifted = variant_ == PolylogVariant::kNash
                                    ? drain_lowest(sampled_, payoffs, 0.5 * alpha_)
                                    : lift_below_threshold(sampled_, payoffs, alpha_);
    finish(shifted.strategy);
  }

  void finish(MixedStrategy s) {
    output_ = std::move(s);
    state_ = State::kDone;
  }

  Role role_;
  Matrix m_;
  std::size_t n_;
  ProtocolParams params_;
  PolylogVariant variant_;
  double alpha_;
  Rng rng_;

  State state_ = State::kIdle;
  ZeroSumSolution sol_;
  bool flagged_ = false;
  MixedStrategy sampled_;
  MixedStrategy output_;
  std::string label_;
};

std::vector<ProtocolDescriptor> make_registry() {
  std::vector<ProtocolDescriptor> out;
  out.push_back({std::string(protocol_id::kNoComm), ChannelRequirement::kNone,
                 [](const PlayerView& v, const ProtocolParams&) { return std::make_unique<NoCommMachine>(v); }});
  out.push_back({std::string(protocol_id::kDmpOneWay), ChannelRequirement::kOneWayFromColumn,
                 [](const PlayerView& v, const ProtocolParams&) { return std::make_unique<DmpMachine>(v); }});
  out.push_back({std::string(protocol_id::kPolylogNe), ChannelRequirement::kTwoWay,
                 [](const PlayerView& v, const ProtocolParams& p) {
                   return std::make_unique<PolylogMachine>(v, p, PolylogVariant::kNash);
                 }});
  out.push_back({std::string(protocol_id::kPolylogWsne), ChannelRequirement::kTwoWay,
                 [](const PlayerView& v, const ProtocolParams& p) {
                   return std::make_unique<PolylogMachine>(v, p, PolylogVariant::kWellSupported);
                 }});
  return out;
}

}  // namespace

const std::vector<ProtocolDescriptor>& builtin_protocols() {
  static const std::vector<ProtocolDescriptor> registry = make_registry();
  return registry;
}

const ProtocolDescriptor& find_protocol(std::string_view id) {
  for (const auto& p : builtin_protocols()) {
    if (p.id == id) return p;
  }
  throw std::invalid_argument("unknown protocol '" + std::string(id) + "'");
}

ChannelPolicy default_policy(std::string_view id) {
  switch (find_protocol(id).requirement) {
    case ChannelRequirement::kNone:
      return ChannelPolicy::none();
    case ChannelRequirement::kOneWayFromColumn:
      return ChannelPolicy::one_way(Role::kColumn);
    case ChannelRequirement::kTwoWay:
      break;
  }
  return ChannelPolicy::two_way();
}

Guarantee guarantee_for(std::string_view id, const ProtocolParams& params) {
  if (id == protocol_id::kNoComm) return {false, 0.75, 1e-9};
  if (id == protocol_id::kDmpOneWay) return {false, 0.5, 1e-9};
  if (id == protocol_id::kPolylogNe) {
    return {false, params.alpha.value_or(kAlphaNe) + params.delta + 2 * kZeroSumTolerance, 1e-6};
  }
  if (id == protocol_id::kPolylogWsne) {
    return {true, params.alpha.value_or(kAlphaWsne) + params.delta + 2 * kZeroSumTolerance, 1e-6};
  }
  throw std::invalid_argument("unknown protocol '" + std::string(id) + "'");
}

std::size_t polylog_bits_case1(std::size_t n, double delta) {
  if (n == 1) return 0;
  return 2 + 2 * sample_size(n, delta) * index_bits(n);
}

std::size_t polylog_bits_case2(std::size_t n, double delta) {
  if (n == 1) return 0;
  return 2 + (sample_size(n, delta) + 1) * index_bits(n);
}

std::size_t polylog_bits_bound(std::size_t n, double delta) {
  const std::size_t w = index_bits(n);
  return 2 * sample_size(n, delta) * w + 2 * w + 2;
}

ProtocolOutcome run_protocol(const BimatrixGame& game, std::string_view id, const ChannelPolicy& policy,
                             const Seeds& seeds, const ProtocolParams& params) {
  return run_protocol(game, find_protocol(id), policy, seeds, params);
}

}  // namespace commnash
