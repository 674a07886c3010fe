#include "afhe/event.hpp"

namespace afhe {

std::string_view decider_token(Decider d) noexcept {
  switch (d) {
    case Decider::AiAlone:
      return "ai_alone";
    case Decider::AiWithSyncHuman:
      return "ai_with_sync_human";
    case Decider::HumanOnly:
      return "human_only";
  }
  return "ai_alone";
}

std::string_view phase_token(EventPhase p) noexcept {
  switch (p) {
    case EventPhase::Offline:
      return "offline";
    case EventPhase::Shadow:
      return "shadow";
    case EventPhase::Operational:
      return "operational";
  }
  return "operational";
}

std::string_view role_token(HumanRole r) noexcept {
  switch (r) {
    case HumanRole::Substitution:
      return "substitution";
    case HumanRole::EthicalOversight:
      return "ethical_oversight";
    case HumanRole::BoundaryPush:
      return "boundary_push";
    case HumanRole::StrategicTuning:
      return "strategic_tuning";
  }
  return "substitution";
}

std::optional<Decider> parse_decider_token(std::string_view token) noexcept {
  if (token == "ai_alone") return Decider::AiAlone;
  if (token == "ai_with_sync_human") return Decider::AiWithSyncHuman;
  if (token == "human_only") return Decider::HumanOnly;
  return std::nullopt;
}

std::optional<EventPhase> parse_phase_token(std::string_view token) noexcept {
  if (token == "offline") return EventPhase::Offline;
  if (token == "shadow") return EventPhase::Shadow;
  if (token == "operational") return EventPhase::Operational;
  return std::nullopt;
}

std::optional<HumanRole> parse_role_token(std::string_view token) noexcept {
  if (token == "substitution") return HumanRole::Substitution;
  if (token == "ethical_oversight") return HumanRole::EthicalOversight;
  if (token == "boundary_push") return HumanRole::BoundaryPush;
  if (token == "strategic_tuning") return HumanRole::StrategicTuning;
  return std::nullopt;
}

void validate_event(const DecisionEvent& event) {
  if (event.task_id.empty()) {
    throw Error(Errc::MissingField, "task_id must be non-empty")
        .with_field("task_id");
  }
  if (event.timestamp < 0) {
    throw Error(Errc::InvalidField, "timestamp must be non-negative")
        .with_field("timestamp");
  }
  if (event.decider == Decider::AiAlone) {
    if (!event.ai_decision) {
      throw Error(Errc::MissingField,
                  "ai_decision is required when decider is ai_alone")
          .with_field("ai_decision");
    }
  } else if (!event.human_decision) {
    throw Error(Errc::MissingField,
                "human_decision is required when a human participated")
        .with_field("human_decision");
  }
  if (event.ai_confidence &&
      (*event.ai_confidence < 0.0 || *event.ai_confidence > 1.0 ||
       *event.ai_confidence != *event.ai_confidence)) {
    throw Error(Errc::InvalidField, "ai_confidence must lie in [0,1]")
        .with_field("ai_confidence");
  }
}

}  // namespace afhe
