"""Smoke tests for the python bindings.

These exercise each bound operation once against values the C++ suites pin
down in depth; they are a wiring check, not a second oracle.
"""

import json
import math

import pytest

import afhe_audit as aa


def small_log():
    events = []
    for i in range(3):
        e = aa.DecisionEvent()
        e.task_id = f"a{i}"
        e.timestamp = i
        e.decider = aa.Decider.AiAlone
        e.ai_decision = "yes"
        events.append(e)
    s = aa.DecisionEvent()
    s.task_id = "s"
    s.timestamp = 3
    s.decider = aa.Decider.AiWithSyncHuman
    s.human_decision = "yes"
    events.append(s)
    for i in range(4):
        e = aa.DecisionEvent()
        e.task_id = f"h{i}"
        e.timestamp = 4 + i
        e.decider = aa.Decider.HumanOnly
        e.human_decision = "no"
        events.append(e)
    return events


def test_compute_alpha_hand_count():
    est = aa.compute_alpha(small_log())
    assert est.alpha == 0.375
    assert est.ai_alone_count == 3
    assert est.total_count == 8
    assert est.ci_low <= est.alpha <= est.ci_high


def test_empty_log_raises():
    with pytest.raises(aa.AuditError):
        aa.compute_alpha([])


def test_cost_model_arithmetic():
    model = aa.CostModel(tau_a=1, tau_h=30, gamma=0.1, tau_review_a=2)
    assert aa.total_cost(model, 0.38, 1000) == pytest.approx(19676.0)
    legacy = aa.CostModel(tau_a=1, tau_h=30, gamma=0, tau_review_a=2)
    share = aa.human_cost_share(legacy, 0.38)
    assert share == pytest.approx(18.6 / 19.6, rel=1e-12)
    assert share > 0.9


def test_regime_classification():
    assert aa.classify_regime(0.38).regime == aa.Regime.Hisoai
    assert aa.classify_regime(0.85).regime == aa.Regime.IdealHitl
    assert aa.classify_regime(0.5).regime == aa.Regime.Transitional


def test_wilson_interval_brackets():
    low, high = aa.wilson_interval(38, 100)
    assert low < 0.38 < high
    assert low == pytest.approx(0.29097599252478734, rel=1e-12)


def test_simulator_recovers_ground_truth():
    spec = aa.builtin_scenario("legacy-hisoai")
    events = aa.simulate_operational(spec)
    assert len(events) == 10000
    est = aa.compute_alpha(events)
    assert abs(est.alpha - 0.38) <= 0.02
    # determinism
    again = aa.compute_alpha(aa.simulate_operational(spec))
    assert again.alpha == est.alpha


def test_offline_gate_flags_the_failing_fixture():
    config = aa.GateConfig()
    config.alpha_target = 0.8
    config.theta = 0.8
    preds = aa.simulate_offline(aa.builtin_scenario("afhe-iteration-1"))
    result = aa.offline_evaluate(preds, config)
    assert result.verdict.outcome == aa.VerdictOutcome.HisoaiFlag
    assert abs(result.alpha.alpha - 0.45) <= 0.02
    assert "human-powered service" in result.verdict.reason


def test_shadow_gate_passes_the_cleared_fixture():
    config = aa.GateConfig()
    config.alpha_target = 0.8
    config.shadow_cycles = 10000
    pairs = aa.simulate_shadow(aa.builtin_scenario("afhe-final"))
    result = aa.shadow_evaluate(pairs, config)
    assert result.verdict.outcome == aa.VerdictOutcome.Pass
    assert abs(result.alpha.alpha - 0.85) <= 0.01


def test_gate_state_machine_replays():
    state = aa.initial_gate_state()
    entry = aa.HistoryEntry()
    entry.phase = aa.GatePhase.OfflineEval
    entry.outcome = aa.VerdictOutcome.HisoaiFlag
    entry.timestamp = 1
    est = aa.compute_alpha(small_log())
    entry.alpha = est
    state = aa.gate_advance(state, entry)
    assert state.phase == aa.GatePhase.Reengineering
    assert state.reengineering_cycles == 1
    replayed = aa.replay_history(state.history)
    assert replayed.phase == state.phase


def test_event_round_trip():
    line = (
        '{"task_id":"t","timestamp":5,"decider":"ai_alone",'
        '"phase":"offline","ai_decision":"ok","ai_confidence":0.91}'
    )
    event = aa.parse_event_line(line)
    assert event.decider == aa.Decider.AiAlone
    assert event.ai_confidence == 0.91
    canonical = aa.serialize_event(event)
    assert aa.serialize_event(aa.parse_event_line(canonical)) == canonical


def test_labor_report_counts():
    events = small_log()
    events[3].human_role = aa.HumanRole.StrategicTuning
    events[4].human_role = aa.HumanRole.Substitution
    labor = aa.labor_report(events)
    assert labor.tagged_count == 2
    assert labor.proportions[0] == 0.5  # substitution
    assert labor.untagged_human_count == 3


def test_windowed_alpha_matches_batch_and_renders_machine_form():
    events = small_log()
    spec = aa.WindowSpec(aa.WindowUnit.Events, 8, 8)
    series = aa.compute_alpha_windowed(events, spec)
    assert len(series) == 1
    batch = aa.compute_alpha(events)
    assert series[0].estimate.alpha == batch.alpha
    rendered = aa.render_windowed_machine(series)
    parsed = json.loads(rendered)
    assert parsed["windows"][0]["alpha"] == 0.375


def test_steady_state_trigger():
    spec = aa.builtin_scenario("afhe-final")
    spec.n_tasks = 2000
    spec.drift = [aa.DriftPoint(0.0, 0.95), aa.DriftPoint(0.5, 0.95),
                  aa.DriftPoint(0.7, 0.2), aa.DriftPoint(1.0, 0.2)]
    events = aa.simulate_operational(spec)
    series = aa.compute_alpha_windowed(
        events, aa.WindowSpec(aa.WindowUnit.Events, 200, 200))
    config = aa.GateConfig()
    config.alpha_target = 0.8
    config.consecutive_breaches = 3
    trigger = aa.steady_state_check(series, config)
    assert trigger is not None
    assert all(a < 0.8 for a in trigger.breached_alphas)


def test_event_store_round_trip(tmp_path):
    store = aa.EventStore(str(tmp_path / "store"))
    receipt = store.append(small_log())
    assert receipt.appended == 8
    replay = store.append(small_log(), idempotency_key="k1")
    assert replay.appended == 8
    dup = store.append(small_log(), idempotency_key="k1")
    assert dup.duplicate
    assert store.total_events() == 16
    assert math.isclose(aa.compute_alpha(store.read()).alpha, 0.375)
