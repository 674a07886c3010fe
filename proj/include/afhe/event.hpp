#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "afhe/error.hpp"

namespace afhe {

using TimestampMs = std::int64_t;  // milliseconds since Unix epoch, UTC

// Which path produced the accepted decision for a task.
enum class Decider {
  AiAlone,          // AI output accepted without synchronous human input
  AiWithSyncHuman,  // human participated synchronously (confirm/override)
  HumanOnly,        // AI bypassed entirely
};

enum class EventPhase { Offline, Shadow, Operational };

enum class HumanRole {
  Substitution,      // re-performing core AI work
  EthicalOversight,  // fairness / alignment vetting
  BoundaryPush,      // out-of-distribution and novel cases
  StrategicTuning,   // labels, features, architecture
};

// One adjudicated task from a decision log.
//
// Invariants (enforced by validate_event / the parser):
//   decider == AiAlone            => ai_decision present
//   decider != AiAlone            => human_decision present
//   ai_confidence, when present, in [0,1]
//
// reviewed_async marks AI-alone decisions that were later reviewed out of
// band; such events still count as AI-alone.
struct DecisionEvent {
  std::string task_id;
  TimestampMs timestamp = 0;
  Decider decider = Decider::AiAlone;
  std::optional<double> ai_confidence;
  std::optional<std::string> ai_decision;
  std::optional<std::string> human_decision;
  bool reviewed_async = false;
  std::optional<HumanRole> human_role;
  EventPhase phase = EventPhase::Operational;

  // Unknown wire-format keys, preserved verbatim for round-tripping.
  // Values are raw JSON text of the original value.
  std::map<std::string, std::string> extra;

  bool human_involved() const noexcept { return decider != Decider::AiAlone; }
};

// Wire tokens. Decider tokens are part of the external record contract.
std::string_view decider_token(Decider d) noexcept;
std::string_view phase_token(EventPhase p) noexcept;
std::string_view role_token(HumanRole r) noexcept;

std::optional<Decider> parse_decider_token(std::string_view token) noexcept;
std::optional<EventPhase> parse_phase_token(std::string_view token) noexcept;
std::optional<HumanRole> parse_role_token(std::string_view token) noexcept;

// Throws Error (MissingField / InvalidField) when an invariant is violated.
void validate_event(const DecisionEvent& event);

}  // namespace afhe
