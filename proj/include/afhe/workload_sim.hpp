#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "afhe/core_metrics.hpp"
#include "afhe/event.hpp"
#include "afhe/gate_engine.hpp"

namespace afhe {

// Normal distribution clamped to [0,1]; spread 0 is a point mass at mean.
struct ConfidenceDist {
  double mean = 0.5;
  double spread = 0.0;
};

struct DriftPoint {
  double time_fraction = 0.0;  // position in the stream, in [0,1]
  double autonomy = 0.0;
};

// Ground-truth parameters for synthetic decision workloads. Everything any
// generator emits is a pure function of the spec (seed included), so equal
// specs produce byte-identical streams.
struct WorkloadSpec {
  double ground_truth_autonomy = 0.5;
  ConfidenceDist confidence_given_autonomous{0.9, 0.05};
  ConfidenceDist confidence_given_dependent{0.3, 0.1};
  double disagreement_rate = 0.0;  // P(D_A != D_H) in shadow mode
  CostModel cost_model;
  std::uint64_t n_tasks = 1;
  std::uint64_t seed = 0;
  std::vector<DriftPoint> drift;  // empty = constant autonomy

  // Quota weights over {Substitution, EthicalOversight, BoundaryPush,
  // StrategicTuning} for tagging human-involved events. All-zero leaves
  // them untagged.
  std::array<double, 4> role_weights{1.0, 0.0, 0.0, 0.0};

  TimestampMs start_timestamp = 1'700'000'000'000;
  TimestampMs step_ms = 1000;
};

void validate_workload_spec(const WorkloadSpec& spec);

// Effective autonomy for task index (drift-interpolated, piecewise linear).
double autonomy_at(const WorkloadSpec& spec, std::uint64_t index);

// Operational log: each task independently AI-alone with the effective
// autonomy probability; strictly increasing timestamps.
std::vector<DecisionEvent> simulate_operational(const WorkloadSpec& spec);

// Phase I material: one scored prediction per task, with confidence drawn
// from the autonomous or dependent distribution.
std::vector<ScoredPrediction> simulate_offline(const WorkloadSpec& spec);

// Phase II material: pairs disagree independently with disagreement_rate.
std::vector<PairedDecision> simulate_shadow(const WorkloadSpec& spec);

// Same material rendered as decision-event streams (phase offline/shadow),
// ready for the line-delimited log format.
std::vector<DecisionEvent> simulate_offline_events(const WorkloadSpec& spec);
std::vector<DecisionEvent> simulate_shadow_events(const WorkloadSpec& spec);

std::vector<std::string> scenario_names();

// Named reconstruction fixtures. Unknown names raise Errc::UnknownScenario
// listing what is available.
WorkloadSpec builtin_scenario(std::string_view name);

// Spec config file I/O (JSON document).
WorkloadSpec workload_spec_from_json_text(std::string_view text);
std::string workload_spec_to_json_text(const WorkloadSpec& spec);

}  // namespace afhe
