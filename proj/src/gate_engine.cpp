#include "afhe/gate_engine.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace afhe {

namespace {

using nlohmann::json;

bool fraction_ok(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

std::string format_alpha(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

GateVerdict make_verdict(const AlphaEstimate& alpha, double target,
                         std::string_view label, std::string_view flag_text) {
  GateVerdict v;
  v.measured_alpha = alpha;
  if (alpha.alpha >= target) {
    v.outcome = VerdictOutcome::Pass;
    v.reason = std::string(label) + " " + format_alpha(alpha.alpha) +
               " meets alpha_target " + format_alpha(target);
  } else {
    v.outcome = VerdictOutcome::HisoaiFlag;
    v.reason = std::string(label) + " " + format_alpha(alpha.alpha) +
               " is below alpha_target " + format_alpha(target) + ": " +
               std::string(flag_text);
  }
  return v;
}

}  // namespace

void validate_gate_config(const GateConfig& config) {
  if (!fraction_ok(config.alpha_target)) {
    throw Error(Errc::InvalidConfig,
                "alpha_target must be set to a value in [0,1]");
  }
  if (config.theta && !fraction_ok(*config.theta)) {
    throw Error(Errc::InvalidConfig, "theta must lie in [0,1]");
  }
  if (config.shadow_cycles < 1) {
    throw Error(Errc::InvalidConfig, "shadow_cycles must be at least 1");
  }
  if (!fraction_ok(config.hisoai_threshold) ||
      !fraction_ok(config.ideal_floor) ||
      config.hisoai_threshold > config.ideal_floor) {
    throw Error(Errc::InvalidConfig,
                "require 0 <= hisoai_threshold <= ideal_floor <= 1");
  }
  if (config.consecutive_breaches < 1) {
    throw Error(Errc::InvalidConfig, "consecutive_breaches must be at least 1");
  }
}

std::string normalize_decision(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += c;
  }
  return out;
}

bool default_decision_equal(std::string_view a, std::string_view b) {
  return normalize_decision(a) == normalize_decision(b);
}

PairedDecision make_paired_decision(std::string task_id,
                                    std::string ai_decision,
                                    std::string human_decision,
                                    const DecisionEquality& equal) {
  PairedDecision p;
  p.agree = equal(ai_decision, human_decision);
  p.task_id = std::move(task_id);
  p.ai_decision = std::move(ai_decision);
  p.human_decision = std::move(human_decision);
  return p;
}

PhaseEvaluation offline_evaluate(std::span<const ScoredPrediction> predictions,
                                 const GateConfig& config) {
  validate_gate_config(config);
  if (!config.theta) {
    throw Error(Errc::InvalidConfig,
                "offline evaluation requires an explicit theta");
  }
  if (predictions.empty()) {
    throw Error(Errc::EmptyLog, "offline evaluation needs at least one prediction");
  }
  const double theta = *config.theta;
  std::uint64_t confident = 0;
  for (const auto& p : predictions) {
    if (!fraction_ok(p.ai_confidence)) {
      throw Error(Errc::DomainError,
                  "prediction confidence must lie in [0,1] (task " +
                      p.task_id + ")");
    }
    if (p.ai_confidence > theta) ++confident;
  }
  PhaseEvaluation out;
  out.alpha = make_alpha_estimate(confident, predictions.size());
  out.verdict = make_verdict(out.alpha, config.alpha_target, "alpha_offline",
                             "system is not an AI-First product and must be "
                             "marketed as a human-powered service");
  return out;
}

PhaseEvaluation shadow_evaluate(std::span<const PairedDecision> pairs,
                                const GateConfig& config) {
  validate_gate_config(config);
  if (pairs.empty()) {
    throw Error(Errc::EmptyLog, "shadow evaluation needs at least one pair");
  }
  std::uint64_t human_required = 0;
  for (const auto& p : pairs) {
    if (!p.agree) ++human_required;
  }
  PhaseEvaluation out;
  out.alpha =
      make_alpha_estimate(pairs.size() - human_required, pairs.size());
  out.verdict = make_verdict(out.alpha, config.alpha_target, "alpha_shadow",
                             "the system is unstable in a live setting");
  if (pairs.size() != config.shadow_cycles) {
    out.warning = "shadow sample holds " + std::to_string(pairs.size()) +
                  " pairs but the configured cycle count is " +
                  std::to_string(config.shadow_cycles);
  }
  return out;
}

std::optional<ReengineeringTrigger> steady_state_check(
    std::span<const WindowedAlpha> windowed, const GateConfig& config) {
  validate_gate_config(config);
  std::size_t run_start = 0;
  std::size_t run_len = 0;
  for (std::size_t i = 0; i < windowed.size(); ++i) {
    if (windowed[i].estimate.alpha < config.alpha_target) {
      if (run_len == 0) run_start = i;
      ++run_len;
      continue;
    }
    if (run_len >= config.consecutive_breaches) break;
    run_len = 0;
  }
  if (run_len < config.consecutive_breaches) return std::nullopt;

  // run_start begins the first maximal breaching run of sufficient length;
  // extend it to the run's end.
  std::size_t run_end = run_start;
  while (run_end + 1 < windowed.size() &&
         windowed[run_end + 1].estimate.alpha < config.alpha_target) {
    ++run_end;
  }
  ReengineeringTrigger trig;
  trig.first_window_start = windowed[run_start].window_start;
  trig.last_window_start = windowed[run_end].window_start;
  trig.alpha_target = config.alpha_target;
  for (std::size_t i = run_start; i <= run_end; ++i) {
    trig.breached_alphas.push_back(windowed[i].estimate.alpha);
  }
  return trig;
}

GateState initial_gate_state() { return GateState{}; }

GateState gate_advance(const GateState& state, const HistoryEntry& entry) {
  if (entry.phase != state.phase) {
    throw Error(Errc::IllegalTransition,
                std::string("outcome is for phase ") +
                    std::string(gate_phase_token(entry.phase)) +
                    " but the gate is in " +
                    std::string(gate_phase_token(state.phase)));
  }
  if (!state.history.empty() &&
      entry.timestamp <= state.history.back().timestamp) {
    throw Error(Errc::IllegalTransition,
                "history must be strictly time-ordered");
  }
  const bool needs_alpha = state.phase != GatePhase::Reengineering;
  if (needs_alpha && !entry.alpha) {
    throw Error(Errc::IllegalTransition,
                "evaluation outcomes must carry a measured alpha");
  }

  GateState next = state;
  switch (state.phase) {
    case GatePhase::OfflineEval:
      next.phase = entry.outcome == VerdictOutcome::Pass
                       ? GatePhase::ShadowEval
                       : GatePhase::Reengineering;
      break;
    case GatePhase::ShadowEval:
      next.phase = entry.outcome == VerdictOutcome::Pass
                       ? GatePhase::Deployed
                       : GatePhase::Reengineering;
      break;
    case GatePhase::Deployed:
      next.phase = entry.outcome == VerdictOutcome::Pass
                       ? GatePhase::Deployed
                       : GatePhase::Reengineering;
      break;
    case GatePhase::Reengineering:
      if (entry.outcome != VerdictOutcome::Pass) {
        throw Error(Errc::IllegalTransition,
                    "re-engineering only resumes to offline evaluation");
      }
      next.phase = GatePhase::OfflineEval;
      break;
  }
  if (next.phase == GatePhase::Reengineering) ++next.reengineering_cycles;
  next.history.push_back(entry);
  return next;
}

GateState replay_history(std::span<const HistoryEntry> entries) {
  GateState state = initial_gate_state();
  for (const auto& e : entries) state = gate_advance(state, e);
  return state;
}

std::string_view gate_phase_token(GatePhase p) noexcept {
  switch (p) {
    case GatePhase::OfflineEval:
      return "offline_eval";
    case GatePhase::ShadowEval:
      return "shadow_eval";
    case GatePhase::Deployed:
      return "deployed";
    case GatePhase::Reengineering:
      return "reengineering";
  }
  return "offline_eval";
}

std::string_view verdict_token(VerdictOutcome o) noexcept {
  return o == VerdictOutcome::Pass ? "pass" : "hisoai_flag";
}

std::optional<GatePhase> parse_gate_phase_token(std::string_view t) noexcept {
  if (t == "offline_eval") return GatePhase::OfflineEval;
  if (t == "shadow_eval") return GatePhase::ShadowEval;
  if (t == "deployed") return GatePhase::Deployed;
  if (t == "reengineering") return GatePhase::Reengineering;
  return std::nullopt;
}

std::optional<VerdictOutcome> parse_verdict_token(std::string_view t) noexcept {
  if (t == "pass") return VerdictOutcome::Pass;
  if (t == "hisoai_flag") return VerdictOutcome::HisoaiFlag;
  return std::nullopt;
}

std::string serialize_history_entry(const HistoryEntry& entry) {
  json obj;
  obj["phase"] = gate_phase_token(entry.phase);
  obj["outcome"] = verdict_token(entry.outcome);
  obj["reason"] = entry.reason;
  obj["timestamp"] = entry.timestamp;
  if (entry.alpha) {
    obj["ai_alone_count"] = entry.alpha->ai_alone_count;
    obj["alpha"] = entry.alpha->alpha;
    obj["ci_high"] = entry.alpha->ci_high;
    obj["ci_low"] = entry.alpha->ci_low;
    obj["total_count"] = entry.alpha->total_count;
  }
  return obj.dump();
}

HistoryEntry parse_history_entry(std::string_view line,
                                 std::size_t line_number) {
  json obj = json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw Error(Errc::SyntaxError, "history line is not a JSON object")
        .with_line(line_number);
  }
  HistoryEntry e;
  try {
    auto phase = parse_gate_phase_token(obj.at("phase").get<std::string>());
    auto outcome = parse_verdict_token(obj.at("outcome").get<std::string>());
    if (!phase || !outcome) {
      throw Error(Errc::InvalidEnum, "unknown phase or outcome token")
          .with_line(line_number);
    }
    e.phase = *phase;
    e.outcome = *outcome;
    e.reason = obj.value("reason", std::string());
    e.timestamp = obj.at("timestamp").get<TimestampMs>();
    if (obj.contains("alpha")) {
      AlphaEstimate a;
      a.alpha = obj.at("alpha").get<double>();
      a.ai_alone_count = obj.at("ai_alone_count").get<std::uint64_t>();
      a.total_count = obj.at("total_count").get<std::uint64_t>();
      a.ci_low = obj.at("ci_low").get<double>();
      a.ci_high = obj.at("ci_high").get<double>();
      e.alpha = a;
    }
  } catch (const json::exception& ex) {
    throw Error(Errc::MissingField,
                std::string("malformed history entry: ") + ex.what())
        .with_line(line_number);
  }
  return e;
}

void append_gate_history(const std::filesystem::path& path,
                         const HistoryEntry& entry) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) {
    throw Error(Errc::IoError, "cannot open history file " + path.string());
  }
  out << serialize_history_entry(entry) << '\n';
  out.flush();
  if (!out) {
    throw Error(Errc::IoError, "write to history file " + path.string());
  }
}

std::vector<HistoryEntry> load_gate_history(
    const std::filesystem::path& path) {
  std::vector<HistoryEntry> entries;
  std::ifstream in(path, std::ios::binary);
  if (!in) return entries;  // absent history means a fresh gate
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    entries.push_back(parse_history_entry(line, line_number));
  }
  return entries;
}

std::vector<ScoredPrediction> predictions_from_events(
    std::span<const DecisionEvent> events) {
  std::vector<ScoredPrediction> out;
  for (const auto& e : events) {
    if (e.phase != EventPhase::Offline) continue;
    if (!e.ai_confidence) {
      throw Error(Errc::MissingField,
                  "offline record " + e.task_id + " lacks ai_confidence")
          .with_field("ai_confidence");
    }
    if (!e.ai_decision) {
      throw Error(Errc::MissingField,
                  "offline record " + e.task_id + " lacks ai_decision")
          .with_field("ai_decision");
    }
    out.push_back({e.task_id, *e.ai_confidence, *e.ai_decision});
  }
  return out;
}

std::vector<PairedDecision> pairs_from_events(
    std::span<const DecisionEvent> events, const DecisionEquality& equal) {
  std::vector<PairedDecision> out;
  for (const auto& e : events) {
    if (e.phase != EventPhase::Shadow) continue;
    if (!e.ai_decision) {
      throw Error(Errc::MissingField,
                  "shadow record " + e.task_id + " lacks ai_decision")
          .with_field("ai_decision");
    }
    if (!e.human_decision) {
      throw Error(Errc::MissingField,
                  "shadow record " + e.task_id + " lacks human_decision")
          .with_field("human_decision");
    }
    out.push_back(make_paired_decision(e.task_id, *e.ai_decision,
                                       *e.human_decision, equal));
  }
  return out;
}

}  // namespace afhe
