#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "afhe/core_metrics.hpp"
#include "afhe/event.hpp"

namespace afhe {

// Eligibility thresholds for the deployment gate. alpha_target and theta
// have no defaults on purpose: both must be chosen explicitly for the
// deployment at hand. theta stays unset until offline evaluation needs it.
struct GateConfig {
  double alpha_target = -1.0;  // must be set to a value in [0,1]
  std::optional<double> theta;
  std::uint64_t shadow_cycles = 1;  // expected shadow sample size M
  double hisoai_threshold = kDefaultHisoaiThreshold;
  double ideal_floor = kDefaultIdealFloor;
  WindowSpec monitor_window{WindowUnit::Events, 1000, 1000};
  std::uint32_t consecutive_breaches = 3;
};

// Throws Errc::InvalidConfig unless every field is in range. theta is only
// checked when present.
void validate_gate_config(const GateConfig& config);

enum class GatePhase { OfflineEval, ShadowEval, Deployed, Reengineering };
enum class VerdictOutcome { Pass, HisoaiFlag };

struct GateVerdict {
  VerdictOutcome outcome = VerdictOutcome::HisoaiFlag;
  AlphaEstimate measured_alpha;
  std::string reason;
};

struct ScoredPrediction {
  std::string task_id;
  double ai_confidence = 0.0;  // in [0,1]
  std::string ai_decision;
};

struct PairedDecision {
  std::string task_id;
  std::string ai_decision;
  std::string human_decision;  // produced blind to the AI output
  bool agree = false;
};

// Decision equality is pluggable so categorical or numeric outputs can be
// compared with tolerance. The default is exact string equality after
// whitespace normalization (trim plus collapsed internal runs).
using DecisionEquality =
    std::function<bool(std::string_view, std::string_view)>;

std::string normalize_decision(std::string_view s);
bool default_decision_equal(std::string_view a, std::string_view b);

PairedDecision make_paired_decision(std::string task_id,
                                    std::string ai_decision,
                                    std::string human_decision,
                                    const DecisionEquality& equal =
                                        default_decision_equal);

struct PhaseEvaluation {
  AlphaEstimate alpha;
  GateVerdict verdict;
  std::optional<std::string> warning;
};

// Phase I: alpha_offline = |{confidence > theta}| / |predictions|, strict
// inequality. Flags when alpha_offline < alpha_target. Requires theta.
PhaseEvaluation offline_evaluate(std::span<const ScoredPrediction> predictions,
                                 const GateConfig& config);

// Phase II: a pair is Human-Required iff the decisions disagree;
// alpha_shadow = 1 - human_required / total. A sample size different from
// config.shadow_cycles is reported as a warning, never an error.
PhaseEvaluation shadow_evaluate(std::span<const PairedDecision> pairs,
                                const GateConfig& config);

struct ReengineeringTrigger {
  TimestampMs first_window_start = 0;
  TimestampMs last_window_start = 0;
  std::vector<double> breached_alphas;  // the consecutive run, in order
  double alpha_target = 0.0;
};

// Steady state: fires iff at least consecutive_breaches consecutive windows
// have alpha < alpha_target. Returns the first maximal breaching run.
// Empty input yields no trigger.
std::optional<ReengineeringTrigger> steady_state_check(
    std::span<const WindowedAlpha> windowed, const GateConfig& config);

// One gate lifecycle transition. Measured phases carry the evaluation's
// alpha; a Reengineering resume does not.
struct HistoryEntry {
  GatePhase phase = GatePhase::OfflineEval;
  std::optional<AlphaEstimate> alpha;
  VerdictOutcome outcome = VerdictOutcome::Pass;
  std::string reason;
  TimestampMs timestamp = 0;
};

struct GateState {
  GatePhase phase = GatePhase::OfflineEval;
  std::vector<HistoryEntry> history;  // append-only, strictly time-ordered
  std::uint64_t reengineering_cycles = 0;
};

GateState initial_gate_state();

// Applies one transition:
//   OfflineEval  -- Pass --> ShadowEval      | HisoaiFlag --> Reengineering
//   ShadowEval   -- Pass --> Deployed        | HisoaiFlag --> Reengineering
//   Deployed     -- Pass --> Deployed        | HisoaiFlag --> Reengineering
//   Reengineering -- Pass (resume) --> OfflineEval
// entry.phase must match state.phase and entry.timestamp must exceed the
// last history timestamp; anything else is Errc::IllegalTransition. Every
// flag entering Reengineering increments reengineering_cycles.
GateState gate_advance(const GateState& state, const HistoryEntry& entry);

// Folds gate_advance over entries from the initial state. Replaying a
// state's own history reproduces that state exactly.
GateState replay_history(std::span<const HistoryEntry> entries);

std::string_view gate_phase_token(GatePhase p) noexcept;
std::string_view verdict_token(VerdictOutcome o) noexcept;
std::optional<GatePhase> parse_gate_phase_token(std::string_view t) noexcept;
std::optional<VerdictOutcome> parse_verdict_token(std::string_view t) noexcept;

// History persistence: line-delimited records in the same grammar as event
// logs (one JSON object per line, alphabetical keys).
std::string serialize_history_entry(const HistoryEntry& entry);
HistoryEntry parse_history_entry(std::string_view line,
                                 std::size_t line_number = 1);
void append_gate_history(const std::filesystem::path& path,
                         const HistoryEntry& entry);
std::vector<HistoryEntry> load_gate_history(const std::filesystem::path& path);

// Adapters from decision logs. Offline-phase records become scored
// predictions (confidence and AI decision required); shadow-phase records
// become pairs, re-deriving agreement through the equality predicate.
std::vector<ScoredPrediction> predictions_from_events(
    std::span<const DecisionEvent> events);
std::vector<PairedDecision> pairs_from_events(
    std::span<const DecisionEvent> events,
    const DecisionEquality& equal = default_decision_equal);

}  // namespace afhe
