"""Autonomy auditing for hybrid human/AI decision systems.

Python bindings over the C++ core: the AI autonomy coefficient with Wilson
confidence intervals, the operational cost model, regime classification,
the AFHE deployment gate (offline / shadow / steady-state monitoring) and
the deterministic synthetic workload generator used as a verification
oracle.
"""

from afhe_audit._afhe_audit import (  # noqa: F401
    AlphaEstimate,
    AppendReceipt,
    AuditError,
    ConfidenceDist,
    CostModel,
    Decider,
    DecisionEvent,
    DriftPoint,
    EventPhase,
    EventStore,
    GateConfig,
    GatePhase,
    GateState,
    GateVerdict,
    HistoryEntry,
    HumanRole,
    LaborAllocation,
    PairedDecision,
    PhaseEvaluation,
    Regime,
    RegimeClassification,
    ReengineeringTrigger,
    ScoredPrediction,
    VerdictOutcome,
    WindowSpec,
    WindowUnit,
    WindowedAlpha,
    WorkloadSpec,
    autonomy_at,
    builtin_scenario,
    classify_regime,
    compute_alpha,
    compute_alpha_windowed,
    default_decision_equal,
    event_path_cost,
    gate_advance,
    human_cost_share,
    initial_gate_state,
    labor_report,
    make_paired_decision,
    normalize_decision,
    offline_evaluate,
    pairs_from_events,
    parse_event_line,
    parse_event_log,
    predictions_from_events,
    render_alpha_machine,
    render_windowed_machine,
    replay_history,
    scenario_names,
    serialize_event,
    serialize_events,
    shadow_evaluate,
    simulate_offline,
    simulate_offline_events,
    simulate_operational,
    simulate_shadow,
    simulate_shadow_events,
    steady_state_check,
    total_cost,
    wilson_interval,
    workload_spec_from_json_text,
    workload_spec_to_json_text,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
