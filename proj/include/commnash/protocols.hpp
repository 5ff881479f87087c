#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "commnash/engine.hpp"
#include "commnash/random.hpp"
#include "commnash/zero_sum.hpp"

namespace commnash {

inline const double kAlphaNe = 0.5 * (5.0 - std::sqrt(17.0));
inline const double kAlphaWsne = std::sqrt(3.0) - 1.0;

namespace protocol_id {
inline constexpr std::string_view kNoComm = "no-comm";
inline constexpr std::string_view kDmpOneWay = "dmp-oneway";
inline constexpr std::string_view kPolylogNe = "polylog-ne";
inline constexpr std::string_view kPolylogWsne = "polylog-wsne";
}  // namespace protocol_id

// A player's own matrix with its own pure strategies as rows: R for the row
// player, C^T for the column player.
Matrix oriented_matrix(const PlayerView& view);

// ---------------------------------------------------------------------------
// Sampled communication of mixed strategies.
// ---------------------------------------------------------------------------

// Sample count ceil(ln n / delta^2), at least 1.
std::size_t sample_size(std::size_t n, double delta);

enum class SampleDirection {
  // The sample is the sender's own strategy; it must keep guaranteeing at
  // least `bound` against every pure reply: min_j x'^T M e_j >= bound.
  kGuarantee,
  // The sample is a strategy for the opponent; it must cap the sender's best
  // pure payoff at `bound`: max_i e_i^T M y' <= bound.
  kCap,
};

struct SampleCheck {
  SampleDirection direction = SampleDirection::kGuarantee;
  double bound = 0.0;
};

// Statistic that `check` compares against its bound.
double sample_statistic(const Matrix& oriented, const MixedStrategy& strategy, SampleDirection direction);
bool sample_accepted(const Matrix& oriented, const MixedStrategy& empirical, const SampleCheck& check);

// k i.i.d. draws from `source`.
std::vector<std::size_t> draw_sample(const MixedStrategy& source, std::size_t k, Rng& rng);

struct SampledStrategy {
  std::vector<std::size_t> draws;
  MixedStrategy empirical;
  int attempts = 0;
  // k * ceil(log2 n)
  std::size_t bits = 0;
};

class SamplingError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

// Draws k = sample_size(n, delta) pure strategies from `source` until the
// empirical distribution passes `check`, up to params.resample_cap attempts.
SampledStrategy sample_and_send(const MixedStrategy& source, const Matrix& oriented,
                                const SampleCheck& check, const ProtocolParams& params, Rng& rng);

// ---------------------------------------------------------------------------
// Probability shifting after the opponent's pure reply.
// ---------------------------------------------------------------------------

struct ShiftResult {
  MixedStrategy strategy;
  double moved_mass = 0.0;
  // Best pure reply that received the mass.
  std::size_t target = 0;
};

// Moves exactly `mass` off the lowest-payoff pure strategies (ascending payoff,
// lowest index first, boundary strategy drained partially) onto the best pure
// strategy. `payoffs` are the sender's payoffs against the opponent's reply.
ShiftResult drain_lowest(const MixedStrategy& x, const Vector& payoffs, double mass);

// Moves all mass on pure strategies paying less than max(payoffs) - alpha onto
// the best pure strategy.
ShiftResult lift_below_threshold(const MixedStrategy& x, const Vector& payoffs, double alpha);

// ---------------------------------------------------------------------------
// Protocol registry.
// ---------------------------------------------------------------------------

enum class PolylogVariant { kNash, kWellSupported };

double default_alpha(PolylogVariant v);

const std::vector<ProtocolDescriptor>& builtin_protocols();
// Throws std::invalid_argument for an unknown identifier.
const ProtocolDescriptor& find_protocol(std::string_view id);

// Least permissive policy the protocol accepts.
ChannelPolicy default_policy(std::string_view id);

// Proven bound a run of the protocol must meet.
struct Guarantee {
  bool well_supported = false;  // compare eps_wsne instead of eps_ne
  double bound = 0.0;
  double slack = 0.0;  // numeric tolerance added when checking
  bool holds(const RegretReport& r) const {
    return (well_supported ? r.eps_wsne : r.eps_ne) <= bound + slack;
  }
};
Guarantee guarantee_for(std::string_view id, const ProtocolParams& params);

// Exact bits a polylog run spends in each case, and the bound both respect:
// 2 k ceil(log2 n) + 2 ceil(log2 n) + 2.
std::size_t polylog_bits_case1(std::size_t n, double delta);
std::size_t polylog_bits_case2(std::size_t n, double delta);
std::size_t polylog_bits_bound(std::size_t n, double delta);

ProtocolOutcome run_protocol(const BimatrixGame& game, std::string_view id, const ChannelPolicy& policy,
                             const Seeds& seeds, const ProtocolParams& params);

}  // namespace commnash
