#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "afhe/core_metrics.hpp"
#include "afhe/event.hpp"
#include "afhe/gate_engine.hpp"

namespace afhe {

// Where tagged human effort goes, by role. Proportions are over tagged
// events only and sum to 1 whenever any tag exists; human-involved events
// without a tag are counted separately, never guessed.
struct LaborAllocation {
  std::array<double, 4> proportions{0.0, 0.0, 0.0, 0.0};  // HumanRole order
  std::array<std::uint64_t, 4> counts{0, 0, 0, 0};
  std::uint64_t tagged_count = 0;
  std::uint64_t untagged_human_count = 0;
  double coverage = 0.0;  // tagged / human-involved; 0 with no tags
};

LaborAllocation labor_report(std::span<const DecisionEvent> events);

struct CostBreakdown {
  CostModel model;
  std::uint64_t n = 0;
  double total = 0.0;
  double per_task = 0.0;
  double human_share = 0.0;  // NaN when degenerate
};

// Everything the `report` command shows; both renderings derive from this
// one struct.
struct ReportDocument {
  std::uint64_t event_count = 0;
  std::array<std::uint64_t, 3> decider_counts{0, 0, 0};  // Decider order
  AlphaEstimate alpha;
  RegimeClassification regime;
  std::optional<CostBreakdown> cost;
  LaborAllocation labor;
};

ReportDocument build_report(std::span<const DecisionEvent> events,
                            const std::optional<CostModel>& cost_model,
                            double hisoai_threshold = kDefaultHisoaiThreshold,
                            double ideal_floor = kDefaultIdealFloor);

// Machine renderings are single-line JSON documents with a trailing newline
// and alphabetically ordered keys, so equal values render byte-identically
// everywhere they appear (CLI, service, reports).
std::string render_alpha_machine(const AlphaEstimate& est);
std::string render_alpha_text(const AlphaEstimate& est);
std::string render_windowed_machine(std::span<const WindowedAlpha> series);
std::string render_windowed_text(std::span<const WindowedAlpha> series);
std::string render_regime_machine(const RegimeClassification& rc);
std::string render_regime_text(const RegimeClassification& rc);
std::string render_cost_machine(const CostBreakdown& cost);
std::string render_cost_text(const CostBreakdown& cost);
std::string render_evaluation_machine(std::string_view phase_label,
                                      const PhaseEvaluation& eval);
std::string render_evaluation_text(std::string_view phase_label,
                                   const PhaseEvaluation& eval);
std::string render_trigger_machine(
    const std::optional<ReengineeringTrigger>& trigger);
std::string render_trigger_text(
    const std::optional<ReengineeringTrigger>& trigger);
std::string render_labor_machine(const LaborAllocation& labor);
std::string render_labor_text(const LaborAllocation& labor);
std::string render_report_machine(const ReportDocument& report);
std::string render_report_text(const ReportDocument& report);

}  // namespace afhe
