#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "commnash/bits.hpp"
#include "commnash/game.hpp"
#include "json.hpp"

namespace commnash {

struct ProtocolParams {
  // Unset means the protocol's own default threshold.
  std::optional<double> alpha;
  double delta = 0.05;
  int resample_cap = 100;

  void validate() const;
};

// Everything a player machine is allowed to see at start-up.
struct PlayerView {
  Role role = Role::kRow;
  Matrix own_matrix;
  std::uint64_t seed = 0;
};

struct Message {
  Role sender = Role::kRow;
  BitString payload;
  // Global send order; strictly increasing for each sender.
  std::size_t round = 0;

  bool operator==(const Message& other) const = default;
};

struct Transcript {
  std::vector<Message> messages;
  std::size_t bits_row_to_col = 0;
  std::size_t bits_col_to_row = 0;

  std::size_t bits_total() const { return bits_row_to_col + bits_col_to_row; }
  std::size_t bits_from(Role sender) const {
    return sender == Role::kRow ? bits_row_to_col : bits_col_to_row;
  }
  bool operator==(const Transcript& other) const = default;
};

nlohmann::json transcript_to_json(const Transcript& t);
Transcript transcript_from_json(const nlohmann::json& j);

enum class ChannelMode { kNone, kOneWay, kTwoWay };

struct ChannelPolicy {
  ChannelMode mode = ChannelMode::kTwoWay;
  // Only meaningful for kOneWay: the single player allowed to send.
  Role one_way_sender = Role::kColumn;
  // Per-direction cap, checked before a message is delivered.
  std::optional<std::size_t> budget_bits;

  static ChannelPolicy none() { return {ChannelMode::kNone, Role::kColumn, std::nullopt}; }
  static ChannelPolicy one_way(Role sender) { return {ChannelMode::kOneWay, sender, std::nullopt}; }
  static ChannelPolicy two_way() { return {ChannelMode::kTwoWay, Role::kColumn, std::nullopt}; }
  ChannelPolicy with_budget(std::size_t bits) const {
    ChannelPolicy p = *this;
    p.budget_bits = bits;
    return p;
  }

  bool allows_sender(Role sender) const;
};

std::string to_string(const ChannelPolicy& p);
ChannelPolicy policy_from_string(const std::string& s);
nlohmann::json policy_to_json(const ChannelPolicy& p);
ChannelPolicy policy_from_json(const nlohmann::json& j);

struct Seeds {
  std::uint64_t row = 0;
  std::uint64_t col = 0;
  bool operator==(const Seeds&) const = default;
};

struct ProtocolOutcome {
  StrategyProfile profile;
  Transcript transcript;
  // Recomputed by the engine from both matrices; never reported by players.
  RegretReport report;
  std::string case_label;
};

// One side of an uncoupled protocol. A machine sees only its PlayerView and
// the payloads the engine delivers to it.
class PlayerMachine {
 public:
  virtual ~PlayerMachine() = default;

  // Messages to send at start-up.
  virtual std::vector<BitString> start() = 0;
  // Messages to send in response to an inbound payload.
  virtual std::vector<BitString> receive(const BitString& payload) = 0;

  virtual bool done() const = 0;
  virtual MixedStrategy output() const = 0;
  virtual std::string case_label() const { return {}; }
};

// Minimal channel a protocol needs in order to run.
enum class ChannelRequirement { kNone, kOneWayFromColumn, kTwoWay };

bool policy_satisfies(const ChannelPolicy& policy, ChannelRequirement req);

using MachineFactory =
    std::function<std::unique_ptr<PlayerMachine>(const PlayerView&, const ProtocolParams&)>;

struct ProtocolDescriptor {
  std::string id;
  ChannelRequirement requirement = ChannelRequirement::kTwoWay;
  MachineFactory make_machine;
};

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IncompatiblePolicyError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

// A message the policy forbids outright (wrong direction or no channel).
class ChannelViolationError : public ProtocolError {
 public:
  ChannelViolationError(const std::string& what, Role sender, std::size_t round)
      : ProtocolError(what), sender_(sender), round_(round) {}
  Role sender() const { return sender_; }
  std::size_t round() const { return round_; }

 private:
  Role sender_;
  std::size_t round_;
};

class BudgetExceededError : public ChannelViolationError {
 public:
  using ChannelViolationError::ChannelViolationError;
};

ProtocolOutcome run_protocol(const BimatrixGame& game, const ProtocolDescriptor& protocol,
                             const ChannelPolicy& policy, const Seeds& seeds,
                             const ProtocolParams& params);

// Re-executes the run and reports whether the transcript is bit-identical.
bool replay(const Transcript& transcript, const BimatrixGame& game,
            const ProtocolDescriptor& protocol, const ChannelPolicy& policy, const Seeds& seeds,
            const ProtocolParams& params);

}  // namespace commnash
