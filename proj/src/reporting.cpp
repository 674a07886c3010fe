#include "afhe/reporting.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace afhe {

namespace {

using nlohmann::json;

const char* const kRoleLabels[4] = {"substitution", "ethical_oversight",
                                    "boundary_push", "strategic_tuning"};

std::string fixed(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

json alpha_to_json(const AlphaEstimate& est) {
  json j;
  j["ai_alone_count"] = est.ai_alone_count;
  j["alpha"] = est.alpha;
  j["ci_high"] = est.ci_high;
  j["ci_low"] = est.ci_low;
  j["total_count"] = est.total_count;
  return j;
}

json windowed_to_json(std::span<const WindowedAlpha> series) {
  json arr = json::array();
  for (const auto& w : series) {
    json j = alpha_to_json(w.estimate);
    j["window_start"] = w.window_start;
    arr.push_back(std::move(j));
  }
  return json{{"windows", std::move(arr)}};
}

json regime_to_json(const RegimeClassification& rc) {
  json j;
  j["alpha"] = rc.alpha;
  j["hisoai_threshold"] = rc.hisoai_threshold;
  j["ideal_floor"] = rc.ideal_floor;
  j["regime"] = regime_token(rc.regime);
  return j;
}

json cost_to_json(const CostBreakdown& c) {
  json j;
  j["gamma"] = c.model.gamma;
  j["human_cost_share"] = c.human_share;
  j["n"] = c.n;
  j["per_task_cost"] = c.per_task;
  j["tau_a"] = c.model.tau_a;
  j["tau_h"] = c.model.tau_h;
  j["tau_review_a"] = c.model.tau_review_a;
  j["total_cost"] = c.total;
  return j;
}

json labor_to_json(const LaborAllocation& labor) {
  json roles;
  for (int r = 0; r < 4; ++r) {
    roles[kRoleLabels[r]] =
        json{{"count", labor.counts[r]}, {"proportion", labor.proportions[r]}};
  }
  json j;
  j["coverage"] = labor.coverage;
  j["roles"] = std::move(roles);
  j["tagged_count"] = labor.tagged_count;
  j["untagged_human_count"] = labor.untagged_human_count;
  return j;
}

json evaluation_to_json(std::string_view phase_label,
                        const PhaseEvaluation& eval) {
  json j;
  j["alpha"] = alpha_to_json(eval.alpha);
  j["outcome"] = verdict_token(eval.verdict.outcome);
  j["phase"] = phase_label;
  j["reason"] = eval.verdict.reason;
  if (eval.warning) j["warning"] = *eval.warning;
  return j;
}

json trigger_to_json(const std::optional<ReengineeringTrigger>& trigger) {
  if (!trigger) return json{{"trigger", nullptr}};
  json t;
  t["alpha_target"] = trigger->alpha_target;
  t["breached_alphas"] = trigger->breached_alphas;
  t["first_window_start"] = trigger->first_window_start;
  t["last_window_start"] = trigger->last_window_start;
  return json{{"trigger", std::move(t)}};
}

std::string one_line(json j) { return j.dump() + "\n"; }

}  // namespace

LaborAllocation labor_report(std::span<const DecisionEvent> events) {
  LaborAllocation out;
  for (const auto& e : events) {
    if (e.human_role) {
      ++out.counts[static_cast<int>(*e.human_role)];
      ++out.tagged_count;
    } else if (e.human_involved()) {
      ++out.untagged_human_count;
    }
  }
  if (out.tagged_count > 0) {
    for (int r = 0; r < 4; ++r) {
      out.proportions[r] = static_cast<double>(out.counts[r]) /
                           static_cast<double>(out.tagged_count);
    }
  }
  const std::uint64_t human_total =
      out.tagged_count + out.untagged_human_count;
  out.coverage = human_total > 0 ? static_cast<double>(out.tagged_count) /
                                       static_cast<double>(human_total)
                                 : 0.0;
  return out;
}

ReportDocument build_report(std::span<const DecisionEvent> events,
                            const std::optional<CostModel>& cost_model,
                            double hisoai_threshold, double ideal_floor) {
  ReportDocument doc;
  doc.event_count = events.size();
  for (const auto& e : events) {
    ++doc.decider_counts[static_cast<int>(e.decider)];
  }
  doc.alpha = compute_alpha(events);
  doc.regime = classify_regime(doc.alpha.alpha, hisoai_threshold, ideal_floor);
  doc.labor = labor_report(events);
  if (cost_model) {
    CostBreakdown cost;
    cost.model = *cost_model;
    cost.n = events.size();
    cost.total = total_cost(*cost_model, doc.alpha.alpha, events.size());
    cost.per_task = cost.total / static_cast<double>(events.size());
    try {
      cost.human_share = human_cost_share(*cost_model, doc.alpha.alpha);
    } catch (const Error&) {
      cost.human_share = std::nan("");
    }
    doc.cost = cost;
  }
  return doc;
}

std::string render_alpha_machine(const AlphaEstimate& est) {
  return one_line(alpha_to_json(est));
}

std::string render_alpha_text(const AlphaEstimate& est) {
  std::string out;
  out += "alpha      " + fixed(est.alpha) + "\n";
  out += "ai alone   " + std::to_string(est.ai_alone_count) + " / " +
         std::to_string(est.total_count) + "\n";
  out += "95% CI     [" + fixed(est.ci_low) + ", " + fixed(est.ci_high) +
         "]\n";
  return out;
}

std::string render_windowed_machine(std::span<const WindowedAlpha> series) {
  return one_line(windowed_to_json(series));
}

std::string render_windowed_text(std::span<const WindowedAlpha> series) {
  std::string out = "window_start        alpha   ai_alone  total\n";
  for (const auto& w : series) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-18lld %7.4f %10llu %6llu\n",
                  static_cast<long long>(w.window_start), w.estimate.alpha,
                  static_cast<unsigned long long>(w.estimate.ai_alone_count),
                  static_cast<unsigned long long>(w.estimate.total_count));
    out += buf;
  }
  if (series.empty()) out += "(no windows)\n";
  return out;
}

std::string render_regime_machine(const RegimeClassification& rc) {
  return one_line(regime_to_json(rc));
}

std::string render_regime_text(const RegimeClassification& rc) {
  std::string out;
  out += "regime     " + std::string(regime_token(rc.regime)) + "\n";
  out += "alpha      " + fixed(rc.alpha) + "\n";
  out += "bounds     hisoai < " + fixed(rc.hisoai_threshold, 2) +
         " <= transitional <= " + fixed(rc.ideal_floor, 2) +
         " < ideal_hitl\n";
  return out;
}

std::string render_cost_machine(const CostBreakdown& cost) {
  return one_line(cost_to_json(cost));
}

std::string render_cost_text(const CostBreakdown& cost) {
  std::string out;
  out += "total cost       " + fixed(cost.total, 6) + "  (n=" +
         std::to_string(cost.n) + ")\n";
  out += "per task         " + fixed(cost.per_task, 6) + "\n";
  out += "human share      " +
         (std::isnan(cost.human_share) ? std::string("undefined")
                                       : fixed(cost.human_share)) +
         "\n";
  out += "model            tau_a=" + fixed(cost.model.tau_a, 2) +
         " tau_h=" + fixed(cost.model.tau_h, 2) +
         " gamma=" + fixed(cost.model.gamma, 2) +
         " tau_review_a=" + fixed(cost.model.tau_review_a, 2) + "\n";
  return out;
}

std::string render_evaluation_machine(std::string_view phase_label,
                                      const PhaseEvaluation& eval) {
  return one_line(evaluation_to_json(phase_label, eval));
}

std::string render_evaluation_text(std::string_view phase_label,
                                   const PhaseEvaluation& eval) {
  std::string out;
  out += "phase      " + std::string(phase_label) + "\n";
  out += "alpha      " + fixed(eval.alpha.alpha) + "  (" +
         std::to_string(eval.alpha.ai_alone_count) + "/" +
         std::to_string(eval.alpha.total_count) + ", CI " +
         fixed(eval.alpha.ci_low) + ".." + fixed(eval.alpha.ci_high) + ")\n";
  out += "verdict    " + std::string(verdict_token(eval.verdict.outcome)) +
         "\n";
  out += "reason     " + eval.verdict.reason + "\n";
  if (eval.warning) out += "warning    " + *eval.warning + "\n";
  return out;
}

std::string render_trigger_machine(
    const std::optional<ReengineeringTrigger>& trigger) {
  return one_line(trigger_to_json(trigger));
}

std::string render_trigger_text(
    const std::optional<ReengineeringTrigger>& trigger) {
  if (!trigger) return "no re-engineering trigger\n";
  std::string out = "RE-ENGINEERING TRIGGER\n";
  out += "windows    " + std::to_string(trigger->first_window_start) + " .. " +
         std::to_string(trigger->last_window_start) + "\n";
  out += "target     " + fixed(trigger->alpha_target) + "\n";
  out += "alphas    ";
  for (double a : trigger->breached_alphas) out += " " + fixed(a);
  out += "\n";
  return out;
}

std::string render_labor_machine(const LaborAllocation& labor) {
  return one_line(labor_to_json(labor));
}

std::string render_labor_text(const LaborAllocation& labor) {
  std::string out;
  if (labor.tagged_count == 0) {
    out += "labor allocation: no role tags present (coverage 0)\n";
  } else {
    out += "labor allocation (" + std::to_string(labor.tagged_count) +
           " tagged, coverage " + fixed(labor.coverage, 2) + ")\n";
    for (int r = 0; r < 4; ++r) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "  %-18s %7.4f  (%llu)\n", kRoleLabels[r],
                    labor.proportions[r],
                    static_cast<unsigned long long>(labor.counts[r]));
      out += buf;
    }
  }
  out += "untagged human-involved events: " +
         std::to_string(labor.untagged_human_count) + "\n";
  return out;
}

std::string render_report_machine(const ReportDocument& report) {
  json j;
  j["alpha"] = alpha_to_json(report.alpha);
  json deciders;
  deciders["ai_alone"] = report.decider_counts[0];
  deciders["ai_with_sync_human"] = report.decider_counts[1];
  deciders["human_only"] = report.decider_counts[2];
  j["decider_counts"] = std::move(deciders);
  j["event_count"] = report.event_count;
  if (report.cost) {
    j["cost"] = cost_to_json(*report.cost);
  }
  j["labor"] = labor_to_json(report.labor);
  j["regime"] = regime_to_json(report.regime);
  return one_line(std::move(j));
}

std::string render_report_text(const ReportDocument& report) {
  std::string out;
  out += "== decision audit ==\n";
  out += "events     " + std::to_string(report.event_count) + "\n";
  out += "  ai_alone             " + std::to_string(report.decider_counts[0]) +
         "\n";
  out += "  ai_with_sync_human   " + std::to_string(report.decider_counts[1]) +
         "\n";
  out += "  human_only           " + std::to_string(report.decider_counts[2]) +
         "\n";
  out += render_alpha_text(report.alpha);
  out += render_regime_text(report.regime);
  if (report.cost) out += render_cost_text(*report.cost);
  out += render_labor_text(report.labor);
  return out;
}

}  // namespace afhe
