#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "afhe/core_metrics.hpp"
#include "afhe/event_ingest.hpp"
#include "afhe/event_store.hpp"
#include "afhe/gate_engine.hpp"
#include "afhe/reporting.hpp"
#include "afhe/workload_sim.hpp"

namespace py = pybind11;
using namespace afhe;

namespace {

void bind_events(py::module_& m) {
  py::enum_<Decider>(m, "Decider")
      .value("AiAlone", Decider::AiAlone)
      .value("AiWithSyncHuman", Decider::AiWithSyncHuman)
      .value("HumanOnly", Decider::HumanOnly);

  py::enum_<EventPhase>(m, "EventPhase")
      .value("Offline", EventPhase::Offline)
      .value("Shadow", EventPhase::Shadow)
      .value("Operational", EventPhase::Operational);

  py::enum_<HumanRole>(m, "HumanRole")
      .value("Substitution", HumanRole::Substitution)
      .value("EthicalOversight", HumanRole::EthicalOversight)
      .value("BoundaryPush", HumanRole::BoundaryPush)
      .value("StrategicTuning", HumanRole::StrategicTuning);

  py::class_<DecisionEvent>(m, "DecisionEvent")
      .def(py::init<>())
      .def_readwrite("task_id", &DecisionEvent::task_id)
      .def_readwrite("timestamp", &DecisionEvent::timestamp)
      .def_readwrite("decider", &DecisionEvent::decider)
      .def_readwrite("ai_confidence", &DecisionEvent::ai_confidence)
      .def_readwrite("ai_decision", &DecisionEvent::ai_decision)
      .def_readwrite("human_decision", &DecisionEvent::human_decision)
      .def_readwrite("reviewed_async", &DecisionEvent::reviewed_async)
      .def_readwrite("human_role", &DecisionEvent::human_role)
      .def_readwrite("phase", &DecisionEvent::phase)
      .def_readwrite("extra", &DecisionEvent::extra)
      .def("human_involved", &DecisionEvent::human_involved)
      .def("__repr__", [](const DecisionEvent& e) {
        return "<DecisionEvent " + e.task_id + " " +
               std::string(decider_token(e.decider)) + ">";
      });

  m.def("parse_event_line", &parse_event_line, py::arg("line"),
        py::arg("line_number") = 1);
  m.def("serialize_event", &serialize_event, py::arg("event"));
  m.def(
      "serialize_events",
      [](const std::vector<DecisionEvent>& events) {
        return serialize_events(events);
      },
      py::arg("events"));
  m.def(
      "parse_event_log",
      [](std::string_view text) { return parse_event_log(text); },
      py::arg("text"));
}

void bind_metrics(py::module_& m) {
  py::class_<AlphaEstimate>(m, "AlphaEstimate")
      .def(py::init<>())
      .def_readonly("alpha", &AlphaEstimate::alpha)
      .def_readonly("ai_alone_count", &AlphaEstimate::ai_alone_count)
      .def_readonly("total_count", &AlphaEstimate::total_count)
      .def_readonly("ci_low", &AlphaEstimate::ci_low)
      .def_readonly("ci_high", &AlphaEstimate::ci_high)
      .def("__repr__", [](const AlphaEstimate& a) {
        return "<AlphaEstimate " + std::to_string(a.alpha) + " (" +
               std::to_string(a.ai_alone_count) + "/" +
               std::to_string(a.total_count) + ")>";
      });

  py::class_<CostModel>(m, "CostModel")
      .def(py::init<>())
      .def(py::init([](double tau_a, double tau_h, double gamma,
                       double tau_review_a) {
             return CostModel{tau_a, tau_h, gamma, tau_review_a};
           }),
           py::arg("tau_a") = 0.0, py::arg("tau_h") = 0.0,
           py::arg("gamma") = 0.0, py::arg("tau_review_a") = 0.0)
      .def_readwrite("tau_a", &CostModel::tau_a)
      .def_readwrite("tau_h", &CostModel::tau_h)
      .def_readwrite("gamma", &CostModel::gamma)
      .def_readwrite("tau_review_a", &CostModel::tau_review_a);

  py::enum_<Regime>(m, "Regime")
      .value("Hisoai", Regime::Hisoai)
      .value("Transitional", Regime::Transitional)
      .value("IdealHitl", Regime::IdealHitl);

  py::class_<RegimeClassification>(m, "RegimeClassification")
      .def_readonly("regime", &RegimeClassification::regime)
      .def_readonly("alpha", &RegimeClassification::alpha)
      .def_readonly("hisoai_threshold",
                    &RegimeClassification::hisoai_threshold)
      .def_readonly("ideal_floor", &RegimeClassification::ideal_floor);

  py::enum_<WindowUnit>(m, "WindowUnit")
      .value("Milliseconds", WindowUnit::Milliseconds)
      .value("Events", WindowUnit::Events);

  py::class_<WindowSpec>(m, "WindowSpec")
      .def(py::init([](WindowUnit unit, std::int64_t window,
                       std::int64_t stride) {
             return WindowSpec{unit, window, stride};
           }),
           py::arg("unit"), py::arg("window"), py::arg("stride"))
      .def_readwrite("unit", &WindowSpec::unit)
      .def_readwrite("window", &WindowSpec::window)
      .def_readwrite("stride", &WindowSpec::stride);

  py::class_<WindowedAlpha>(m, "WindowedAlpha")
      .def_readonly("window_start", &WindowedAlpha::window_start)
      .def_readonly("estimate", &WindowedAlpha::estimate);

  m.def(
      "compute_alpha",
      [](const std::vector<DecisionEvent>& events) {
        return compute_alpha(events);
      },
      py::arg("events"));
  m.def(
      "compute_alpha_windowed",
      [](const std::vector<DecisionEvent>& events, const WindowSpec& spec) {
        return compute_alpha_windowed(events, spec);
      },
      py::arg("events"), py::arg("window"));
  m.def("total_cost", &total_cost, py::arg("model"), py::arg("alpha"),
        py::arg("n"));
  m.def("human_cost_share", &human_cost_share, py::arg("model"),
        py::arg("alpha"));
  m.def("event_path_cost", &event_path_cost, py::arg("model"),
        py::arg("event"));
  m.def("classify_regime", &classify_regime, py::arg("alpha"),
        py::arg("hisoai_threshold") = kDefaultHisoaiThreshold,
        py::arg("ideal_floor") = kDefaultIdealFloor);
  m.def(
      "wilson_interval",
      [](std::uint64_t k, std::uint64_t n) {
        double low = 0.0, high = 0.0;
        wilson_interval(k, n, low, high);
        return py::make_tuple(low, high);
      },
      py::arg("k"), py::arg("n"));
}

void bind_gate(py::module_& m) {
  py::enum_<GatePhase>(m, "GatePhase")
      .value("OfflineEval", GatePhase::OfflineEval)
      .value("ShadowEval", GatePhase::ShadowEval)
      .value("Deployed", GatePhase::Deployed)
      .value("Reengineering", GatePhase::Reengineering);

  py::enum_<VerdictOutcome>(m, "VerdictOutcome")
      .value("Pass", VerdictOutcome::Pass)
      .value("HisoaiFlag", VerdictOutcome::HisoaiFlag);

  py::class_<GateConfig>(m, "GateConfig")
      .def(py::init<>())
      .def_readwrite("alpha_target", &GateConfig::alpha_target)
      .def_readwrite("theta", &GateConfig::theta)
      .def_readwrite("shadow_cycles", &GateConfig::shadow_cycles)
      .def_readwrite("hisoai_threshold", &GateConfig::hisoai_threshold)
      .def_readwrite("ideal_floor", &GateConfig::ideal_floor)
      .def_readwrite("monitor_window", &GateConfig::monitor_window)
      .def_readwrite("consecutive_breaches",
                     &GateConfig::consecutive_breaches);

  py::class_<GateVerdict>(m, "GateVerdict")
      .def_readonly("outcome", &GateVerdict::outcome)
      .def_readonly("measured_alpha", &GateVerdict::measured_alpha)
      .def_readonly("reason", &GateVerdict::reason);

  py::class_<ScoredPrediction>(m, "ScoredPrediction")
      .def(py::init([](std::string task_id, double confidence,
                       std::string decision) {
             return ScoredPrediction{std::move(task_id), confidence,
                                     std::move(decision)};
           }),
           py::arg("task_id"), py::arg("ai_confidence"),
           py::arg("ai_decision") = "")
      .def_readwrite("task_id", &ScoredPrediction::task_id)
      .def_readwrite("ai_confidence", &ScoredPrediction::ai_confidence)
      .def_readwrite("ai_decision", &ScoredPrediction::ai_decision);

  py::class_<PairedDecision>(m, "PairedDecision")
      .def_readwrite("task_id", &PairedDecision::task_id)
      .def_readwrite("ai_decision", &PairedDecision::ai_decision)
      .def_readwrite("human_decision", &PairedDecision::human_decision)
      .def_readwrite("agree", &PairedDecision::agree);

  py::class_<PhaseEvaluation>(m, "PhaseEvaluation")
      .def_readonly("alpha", &PhaseEvaluation::alpha)
      .def_readonly("verdict", &PhaseEvaluation::verdict)
      .def_readonly("warning", &PhaseEvaluation::warning);

  py::class_<ReengineeringTrigger>(m, "ReengineeringTrigger")
      .def_readonly("first_window_start",
                    &ReengineeringTrigger::first_window_start)
      .def_readonly("last_window_start",
                    &ReengineeringTrigger::last_window_start)
      .def_readonly("breached_alphas", &ReengineeringTrigger::breached_alphas)
      .def_readonly("alpha_target", &ReengineeringTrigger::alpha_target);

  py::class_<HistoryEntry>(m, "HistoryEntry")
      .def(py::init<>())
      .def_readwrite("phase", &HistoryEntry::phase)
      .def_readwrite("alpha", &HistoryEntry::alpha)
      .def_readwrite("outcome", &HistoryEntry::outcome)
      .def_readwrite("reason", &HistoryEntry::reason)
      .def_readwrite("timestamp", &HistoryEntry::timestamp);

  py::class_<GateState>(m, "GateState")
      .def(py::init<>())
      .def_readonly("phase", &GateState::phase)
      .def_readonly("history", &GateState::history)
      .def_readonly("reengineering_cycles", &GateState::reengineering_cycles);

  m.def("normalize_decision", &normalize_decision, py::arg("decision"));
  m.def("default_decision_equal", &default_decision_equal, py::arg("a"),
        py::arg("b"));
  m.def(
      "make_paired_decision",
      [](std::string task_id, std::string ai_decision,
         std::string human_decision) {
        return make_paired_decision(std::move(task_id), std::move(ai_decision),
                                    std::move(human_decision));
      },
      py::arg("task_id"), py::arg("ai_decision"), py::arg("human_decision"));
  m.def(
      "offline_evaluate",
      [](const std::vector<ScoredPrediction>& predictions,
         const GateConfig& config) {
        return offline_evaluate(predictions, config);
      },
      py::arg("predictions"), py::arg("config"));
  m.def(
      "shadow_evaluate",
      [](const std::vector<PairedDecision>& pairs, const GateConfig& config) {
        return shadow_evaluate(pairs, config);
      },
      py::arg("pairs"), py::arg("config"));
  m.def(
      "steady_state_check",
      [](const std::vector<WindowedAlpha>& windowed, const GateConfig& config) {
        return steady_state_check(windowed, config);
      },
      py::arg("windowed"), py::arg("config"));
  m.def("initial_gate_state", &initial_gate_state);
  m.def("gate_advance", &gate_advance, py::arg("state"), py::arg("entry"));
  m.def(
      "replay_history",
      [](const std::vector<HistoryEntry>& entries) {
        return replay_history(entries);
      },
      py::arg("entries"));
  m.def(
      "predictions_from_events",
      [](const std::vector<DecisionEvent>& events) {
        return predictions_from_events(events);
      },
      py::arg("events"));
  m.def(
      "pairs_from_events",
      [](const std::vector<DecisionEvent>& events) {
        return pairs_from_events(events);
      },
      py::arg("events"));
}

void bind_simulation(py::module_& m) {
  py::class_<ConfidenceDist>(m, "ConfidenceDist")
      .def(py::init([](double mean, double spread) {
             return ConfidenceDist{mean, spread};
           }),
           py::arg("mean"), py::arg("spread") = 0.0)
      .def_readwrite("mean", &ConfidenceDist::mean)
      .def_readwrite("spread", &ConfidenceDist::spread);

  py::class_<DriftPoint>(m, "DriftPoint")
      .def(py::init([](double time_fraction, double autonomy) {
             return DriftPoint{time_fraction, autonomy};
           }),
           py::arg("time_fraction"), py::arg("autonomy"))
      .def_readwrite("time_fraction", &DriftPoint::time_fraction)
      .def_readwrite("autonomy", &DriftPoint::autonomy);

  py::class_<WorkloadSpec>(m, "WorkloadSpec")
      .def(py::init<>())
      .def_readwrite("ground_truth_autonomy",
                     &WorkloadSpec::ground_truth_autonomy)
      .def_readwrite("confidence_given_autonomous",
                     &WorkloadSpec::confidence_given_autonomous)
      .def_readwrite("confidence_given_dependent",
                     &WorkloadSpec::confidence_given_dependent)
      .def_readwrite("disagreement_rate", &WorkloadSpec::disagreement_rate)
      .def_readwrite("cost_model", &WorkloadSpec::cost_model)
      .def_readwrite("n_tasks", &WorkloadSpec::n_tasks)
      .def_readwrite("seed", &WorkloadSpec::seed)
      .def_readwrite("drift", &WorkloadSpec::drift)
      .def_readwrite("role_weights", &WorkloadSpec::role_weights)
      .def_readwrite("start_timestamp", &WorkloadSpec::start_timestamp)
      .def_readwrite("step_ms", &WorkloadSpec::step_ms);

  m.def("simulate_operational", &simulate_operational, py::arg("spec"));
  m.def("simulate_offline", &simulate_offline, py::arg("spec"));
  m.def("simulate_shadow", &simulate_shadow, py::arg("spec"));
  m.def("simulate_offline_events", &simulate_offline_events, py::arg("spec"));
  m.def("simulate_shadow_events", &simulate_shadow_events, py::arg("spec"));
  m.def("builtin_scenario", &builtin_scenario, py::arg("name"));
  m.def("scenario_names", &scenario_names);
  m.def("workload_spec_from_json_text",
        [](std::string_view text) { return workload_spec_from_json_text(text); },
        py::arg("text"));
  m.def("workload_spec_to_json_text", &workload_spec_to_json_text,
        py::arg("spec"));
  m.def("autonomy_at", &autonomy_at, py::arg("spec"), py::arg("index"));
}

void bind_reporting(py::module_& m) {
  py::class_<LaborAllocation>(m, "LaborAllocation")
      .def_readonly("proportions", &LaborAllocation::proportions)
      .def_readonly("counts", &LaborAllocation::counts)
      .def_readonly("tagged_count", &LaborAllocation::tagged_count)
      .def_readonly("untagged_human_count",
                    &LaborAllocation::untagged_human_count)
      .def_readonly("coverage", &LaborAllocation::coverage);

  m.def(
      "labor_report",
      [](const std::vector<DecisionEvent>& events) {
        return labor_report(events);
      },
      py::arg("events"));
  m.def("render_alpha_machine", &render_alpha_machine, py::arg("estimate"));
  m.def(
      "render_windowed_machine",
      [](const std::vector<WindowedAlpha>& series) {
        return render_windowed_machine(series);
      },
      py::arg("series"));
}

void bind_store(py::module_& m) {
  py::class_<AppendReceipt>(m, "AppendReceipt")
      .def_readonly("appended", &AppendReceipt::appended)
      .def_readonly("manifest_version", &AppendReceipt::manifest_version)
      .def_readonly("duplicate", &AppendReceipt::duplicate);

  py::class_<EventStore>(m, "EventStore")
      .def(py::init<std::filesystem::path, bool, std::uint64_t>(),
           py::arg("dir"), py::arg("create_if_missing") = true,
           py::arg("segment_capacity") = EventStore::kDefaultSegmentCapacity)
      .def(
          "append",
          [](EventStore& store, const std::vector<DecisionEvent>& events,
             const std::optional<std::string>& idempotency_key) {
            return store.append(events, idempotency_key);
          },
          py::arg("events"), py::arg("idempotency_key") = std::nullopt)
      .def(
          "read",
          [](const EventStore& store) { return store.read(); })
      .def("seal_active", &EventStore::seal_active)
      .def("total_events", &EventStore::total_events);
}

}  // namespace

PYBIND11_MODULE(_afhe_audit, m) {
  m.doc() =
      "Autonomy auditing for hybrid human/AI decision systems: the AI "
      "autonomy coefficient, the operational cost model, the AFHE "
      "deployment gate and the synthetic workload oracle.";

  py::register_exception<Error>(m, "AuditError");

  bind_events(m);
  bind_metrics(m);
  bind_gate(m);
  bind_simulation(m);
  bind_reporting(m);
  bind_store(m);
}
