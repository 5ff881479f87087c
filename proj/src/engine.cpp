#include "commnash/engine.hpp"

#include <array>
#include <deque>
#include <sstream>
#include <utility>

namespace commnash {

void ProtocolParams::validate() const {
  if (alpha && !(*alpha > 0.0 && *alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0,1)");
  }
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0,1]");
  if (resample_cap < 1) throw std::invalid_argument("resample_cap must be >= 1");
}

bool ChannelPolicy::allows_sender(Role sender) const {
  switch (mode) {
    case ChannelMode::kNone:
      return false;
    case ChannelMode::kOneWay:
      return sender == one_way_sender;
    case ChannelMode::kTwoWay:
      return true;
  }
  return false;
}

bool policy_satisfies(const ChannelPolicy& policy, ChannelRequirement req) {
  switch (req) {
    case ChannelRequirement::kNone:
      return true;
    case ChannelRequirement::kOneWayFromColumn:
      return policy.allows_sender(Role::kColumn);
    case ChannelRequirement::kTwoWay:
      return policy.mode == ChannelMode::kTwoWay;
  }
  return false;
}

std::string to_string(const ChannelPolicy& p) {
  std::string s;
  switch (p.mode) {
    case ChannelMode::kNone:
      s = "none";
      break;
    case ChannelMode::kOneWay:
      s = std::string("one-way:") + to_string(p.one_way_sender);
      break;
    case ChannelMode::kTwoWay:
      s = "two-way";
      break;
  }
  if (p.budget_bits) s += ",budget=" + std::to_string(*p.budget_bits);
  return s;
}

ChannelPolicy policy_from_string(const std::string& s) {
  std::string head = s;
  std::optional<std::size_t> budget;
  if (const auto comma = s.find(','); comma != std::string::npos) {
    head = s.substr(0, comma);
    const std::string rest = s.substr(comma + 1);
    if (rest.rfind("budget=", 0) != 0) throw std::invalid_argument("bad policy option '" + rest + "'");
    budget = static_cast<std::size_t>(std::stoull(rest.substr(7)));
  }
  ChannelPolicy p;
  if (head == "none") {
    p = ChannelPolicy::none();
  } else if (head == "two-way") {
    p = ChannelPolicy::two_way();
  } else if (head.rfind("one-way:", 0) == 0) {
    p = ChannelPolicy::one_way(role_from_string(head.substr(8)));
  } else {
    throw std::invalid_argument("unknown channel policy '" + s + "'");
  }
  p.budget_bits = budget;
  return p;
}

nlohmann::json policy_to_json(const ChannelPolicy& p) { return to_string(p); }

ChannelPolicy policy_from_json(const nlohmann::json& j) { return policy_from_string(j.get<std::string>()); }

nlohmann::json transcript_to_json(const Transcript& t) {
  nlohmann::json msgs = nlohmann::json::array();
  for (const Message& m : t.messages) {
    msgs.push_back({{"sender", to_string(m.sender)},
                    {"round", m.round},
                    {"payload", m.payload.to_hex()},
                    {"bits", m.payload.size()}});
  }
  return {{"messages", msgs},
          {"bits_row_to_col", t.bits_row_to_col},
          {"bits_col_to_row", t.bits_col_to_row},
          {"bits_total", t.bits_total()}};
}

Transcript transcript_from_json(const nlohmann::json& j) {
  Transcript t;
  for (const auto& m : j.at("messages")) {
    Message msg;
    msg.sender = role_from_string(m.at("sender").get<std::string>());
    msg.round = m.at("round").get<std::size_t>();
    msg.payload = BitString::from_hex(m.at("payload").get<std::string>(), m.at("bits").get<std::size_t>());
    t.messages.push_back(std::move(msg));
  }
  t.bits_row_to_col = j.at("bits_row_to_col").get<std::size_t>();
  t.bits_col_to_row = j.at("bits_col_to_row").get<std::size_t>();
  return t;
}

namespace {

// Guards against a machine pair that never stops talking.
constexpr std::size_t kMaxMessages = 1'000'000;

class Channel {
 public:
  Channel(const ChannelPolicy& policy, Transcript& transcript) : policy_(policy), transcript_(transcript) {}

  void send(Role sender, BitString payload) {
    const std::size_t round = transcript_.messages.size();
    if (round >= kMaxMessages) throw ProtocolError("message limit exceeded; protocol does not terminate");
    if (payload.empty()) throw ProtocolError("empty message payload");
    if (!policy_.allows_sender(sender)) {
      std::ostringstream os;
      os << "policy " << to_string(policy_) << " forbids a message from " << to_string(sender)
         << " at round " << round;
      throw ChannelViolationError(os.str(), sender, round);
    }
    std::size_t& spent = sender == Role::kRow ? transcript_.bits_row_to_col : transcript_.bits_col_to_row;
    if (policy_.budget_bits && spent + payload.size() > *policy_.budget_bits) {
      std::ostringstream os;
      os << to_string(sender) << " exceeds the " << *policy_.budget_bits << "-bit budget at round "
         << round << " (" << spent << " spent, " << payload.size() << " requested)";
      throw BudgetExceededError(os.str(), sender, round);
    }
    spent += payload.size();
    transcript_.messages.push_back({sender, payload, round});
    pending_.emplace_back(sender, std::move(payload));
  }

  bool has_pending() const { return !pending_.empty(); }

  std::pair<Role, BitString> pop() {
    auto front = std::move(pending_.front());
    pending_.pop_front();
    return front;
  }

 private:
  const ChannelPolicy& policy_;
  Transcript& transcript_;
  std::deque<std::pair<Role, BitString>> pending_;
};

}  // namespace

ProtocolOutcome run_protocol(const BimatrixGame& game, const ProtocolDescriptor& protocol,
                             const ChannelPolicy& policy, const Seeds& seeds,
                             const ProtocolParams& params) {
  params.validate();
  if (!policy_satisfies(policy, protocol.requirement)) {
    throw IncompatiblePolicyError("protocol '" + protocol.id + "' cannot run under policy " +
                                  to_string(policy));
  }

  std::array<std::unique_ptr<PlayerMachine>, 2> machines = {
      protocol.make_machine(PlayerView{Role::kRow, game.R(), seeds.row}, params),
      protocol.make_machine(PlayerView{Role::kColumn, game.C(), seeds.col}, params)};
  auto machine = [&](Role r) -> PlayerMachine& { return *machines[r == Role::kRow ? 0 : 1]; };

  ProtocolOutcome out;
  Channel channel(policy, out.transcript);
  for (Role r : {Role::kRow, Role::kColumn}) {
    for (BitString& msg : machine(r).start()) channel.send(r, std::move(msg));
  }
  while (channel.has_pending()) {
    auto [sender, payload] = channel.pop();
    const Role receiver = opponent(sender);
    for (BitString& msg : machine(receiver).receive(payload)) channel.send(receiver, std::move(msg));
  }
  for (Role r : {Role::kRow, Role::kColumn}) {
    if (!machine(r).done()) {
      throw ProtocolError(std::string("protocol '") + protocol.id + "' stalled: " + to_string(r) +
                          " player never finished");
    }
  }

  out.profile = {machine(Role::kRow).output(), machine(Role::kColumn).output()};
  if (out.profile.row.size() != game.n() || out.profile.col.size() != game.n()) {
    throw ProtocolError("player output has the wrong dimension");
  }
  out.report = regret_report(game, out.profile);
  out.case_label = machine(Role::kRow).case_label();
  if (out.case_label.empty()) out.case_label = machine(Role::kColumn).case_label();
  return out;
}

bool replay(const Transcript& transcript, const BimatrixGame& game,
            const ProtocolDescriptor& protocol, const ChannelPolicy& policy, const Seeds& seeds,
            const ProtocolParams& params) {
  try {
    return run_protocol(game, protocol, policy, seeds, params).transcript == transcript;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace commnash
