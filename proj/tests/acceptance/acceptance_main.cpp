// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits with the number of failed criteria. Criterion 1 and 3
// drive the real CLI binary through a shell pipeline; everything else goes
// through the public library surface (which the CLI wraps 1:1).
//
// Usage: afhe_acceptance <path-to-afhe-binary>

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "afhe/cli.hpp"
#include "afhe/core_metrics.hpp"
#include "afhe/event_ingest.hpp"
#include "afhe/event_store.hpp"
#include "afhe/gate_engine.hpp"
#include "afhe/monitor_service.hpp"
#include "afhe/reporting.hpp"
#include "afhe/rng.hpp"
#include "afhe/workload_sim.hpp"
#include "../test_support.hpp"

using namespace afhe;
using nlohmann::json;

namespace {

std::string g_afhe_bin;

struct ShellResult {
  int exit_code = -1;
  std::string out;
};

ShellResult run_shell(const std::string& command) {
  ShellResult result;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) return result;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = ::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    result.out.append(buf.data(), n);
  }
  const int status = ::pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// ---------------------------------------------------------------------------

Check criterion_hisoai_diagnosis() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();

  const auto alpha_run = run_shell(
      g_afhe_bin + " simulate --scenario legacy-hisoai --seed 42 | " +
      g_afhe_bin + " alpha --format machine");
  c.expect(alpha_run.exit_code == 0, "alpha pipeline exit code");
  double measured = -1.0;
  std::uint64_t total = 0;
  if (alpha_run.exit_code == 0) {
    const json j = json::parse(alpha_run.out, nullptr, false);
    c.expect(!j.is_discarded(), "alpha output parses");
    if (!j.is_discarded()) {
      measured = j.at("alpha").get<double>();
      total = j.at("total_count").get<std::uint64_t>();
    }
  }
  c.expect(total == 10000, "N = 10000 (got " + std::to_string(total) + ")");
  c.expect(std::abs(measured - 0.38) <= 0.02,
           "alpha " + fmt(measured) + " within 0.38 +/- 0.02");

  const auto regime_run = run_shell(
      g_afhe_bin + " simulate --scenario legacy-hisoai --seed 42 | " +
      g_afhe_bin + " regime --format machine");
  c.expect(regime_run.exit_code == 1, "regime exits 1 on a HISOAI diagnosis");
  const json rj = json::parse(regime_run.out, nullptr, false);
  c.expect(!rj.is_discarded() && rj.at("regime") == "hisoai",
           "regime is hisoai");

  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 5.0, "runtime " + fmt(elapsed) + "s < 5s");
  return c;
}

Check criterion_cost_share() {
  Check c;
  const CostModel legacy = builtin_scenario("legacy-hisoai").cost_model;
  const double share = human_cost_share(legacy, 0.38);
  const double expected = 18.6 / 19.6;  // independent decomposition of Eq. form
  c.expect(share > 0.9, "share " + fmt(share) + " exceeds 0.9");
  c.expect(std::abs(share - expected) <= 1e-9 * expected,
           "share matches " + fmt(expected) + " to 1e-9 relative");
  return c;
}

Check criterion_gate_iterations() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();

  const auto flagged = run_shell(
      g_afhe_bin + " simulate --scenario afhe-iteration-1 --phase offline | " +
      g_afhe_bin + " gate offline --target 0.8 --theta 0.8 --format machine");
  c.expect(flagged.exit_code == 1, "iteration-1 offline gate exits 1");
  const json fj = json::parse(flagged.out, nullptr, false);
  if (c.expect(!fj.is_discarded(), "offline output parses"); !fj.is_discarded()) {
    const double a = fj.at("alpha").at("alpha").get<double>();
    c.expect(std::abs(a - 0.45) <= 0.02,
             "alpha_offline " + fmt(a) + " within 0.45 +/- 0.02");
    c.expect(fj.at("outcome") == "hisoai_flag", "offline outcome is the flag");
  }

  const auto cleared = run_shell(
      g_afhe_bin + " simulate --scenario afhe-final --phase shadow | " +
      g_afhe_bin + " gate shadow --target 0.8 --format machine 2>/dev/null");
  c.expect(cleared.exit_code == 0, "afhe-final shadow gate exits 0");
  const json sj = json::parse(cleared.out, nullptr, false);
  if (!sj.is_discarded()) {
    const double a = sj.at("alpha").at("alpha").get<double>();
    c.expect(std::abs(a - 0.85) <= 0.01,
             "alpha_shadow " + fmt(a) + " within 0.85 +/- 0.01");
    c.expect(sj.at("alpha").at("total_count") == 10000, "M = 10000");
    c.expect(sj.at("outcome") == "pass", "shadow outcome is pass");
  } else {
    c.expect(false, "shadow output parses");
  }

  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 5.0, "runtime " + fmt(elapsed) + "s < 5s");
  return c;
}

Check criterion_labor_shift() {
  Check c;

  const auto legacy_events =
      simulate_operational(builtin_scenario("legacy-hisoai"));
  const LaborAllocation legacy = labor_report(legacy_events);
  std::array<std::uint64_t, 4> recount{0, 0, 0, 0};
  std::uint64_t tagged = 0;
  for (const auto& e : legacy_events) {
    if (e.human_role) {
      ++recount[static_cast<int>(*e.human_role)];
      ++tagged;
    }
  }
  c.expect(legacy.tagged_count == tagged, "tag count equals recount");
  for (int r = 0; r < 4; ++r) {
    c.expect(legacy.counts[r] == recount[r],
             "role counts equal recount exactly");
    c.expect(legacy.proportions[r] ==
                 static_cast<double>(recount[r]) / static_cast<double>(tagged),
             "proportions are exact ratios");
  }
  c.expect(legacy.proportions[0] >= 0.9,
           "legacy substitution share " + fmt(legacy.proportions[0]) +
               " >= 0.9");

  const LaborAllocation cleared =
      labor_report(simulate_operational(builtin_scenario("afhe-final")));
  c.expect(cleared.counts[0] == 0 && cleared.proportions[0] == 0.0,
           "afhe-final substitution is exactly 0");
  c.expect(cleared.tagged_count > 0, "afhe-final has empowered-role tags");
  return c;
}

Check criterion_estimator_concentration() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::uint64_t kTrials = 1000;
  constexpr std::uint64_t kN = 10000;
  std::uint64_t failures = 0;
  WorkloadSpec spec;
  spec.n_tasks = kN;
  spec.cost_model = {1.0, 10.0, 0.1, 2.0};
  for (std::uint64_t trial = 0; trial < kTrials; ++trial) {
    const double p = 0.05 + 0.9 * rng::unit(rng::draw_u64(trial, 970, 0));
    spec.ground_truth_autonomy = p;
    spec.seed = trial;
    const double alpha = compute_alpha(simulate_operational(spec)).alpha;
    const double bound = 4.0 * std::sqrt(p * (1.0 - p) / double(kN));
    if (std::abs(alpha - p) > bound) ++failures;
  }
  const double rate = double(failures) / double(kTrials);
  c.expect(rate <= 0.01, "4-sigma exceedance rate " + fmt(rate) + " <= 1%");
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 60.0, "runtime " + fmt(elapsed) + "s < 60s");
  return c;
}

Check criterion_cost_properties() {
  Check c;
  std::uint64_t linearity_bad = 0, boundary_bad = 0, monotonic_bad = 0;
  constexpr std::uint64_t kPoints = 10000;
  for (std::uint64_t i = 0; i < kPoints; ++i) {
    const CostModel m{rng::unit(rng::draw_u64(6, 1, i)) * 10,
                      rng::unit(rng::draw_u64(6, 2, i)) * 40,
                      rng::unit(rng::draw_u64(6, 3, i)),
                      rng::unit(rng::draw_u64(6, 4, i)) * 8};
    const double alpha = rng::unit(rng::draw_u64(6, 5, i));
    const std::uint64_t n = 1 + rng::draw_u64(6, 6, i) % 100000;
    const std::uint64_t k = 1 + rng::draw_u64(6, 7, i) % 50;

    const double lhs = total_cost(m, alpha, k * n);
    const double rhs = double(k) * total_cost(m, alpha, n);
    if (std::abs(lhs - rhs) > 1e-9 * std::max(std::abs(lhs), 1.0)) {
      ++linearity_bad;
    }

    CostModel no_review = m;
    no_review.gamma = 0.0;
    if (total_cost(no_review, 1.0, n) != double(n) * m.tau_a) ++boundary_bad;
    if (total_cost(m, 0.0, n) != double(n) * (m.tau_a + m.tau_h)) {
      ++boundary_bad;
    }

    const double a1 = rng::unit(rng::draw_u64(6, 8, i));
    const double a2 = rng::unit(rng::draw_u64(6, 9, i));
    const double lo = std::min(a1, a2), hi = std::max(a1, a2);
    if (hi - lo > 1e-9) {
      const double margin = m.gamma * m.tau_review_a - m.tau_h;
      const double diff = total_cost(m, hi, n) - total_cost(m, lo, n);
      const double scale = std::max(1.0, std::abs(total_cost(m, lo, n)));
      if (margin > 1e-9 && diff <= 0) ++monotonic_bad;
      if (margin < -1e-9 && diff >= 0) ++monotonic_bad;
      if (std::abs(margin) <= 1e-12 && std::abs(diff) > 1e-9 * scale) {
        ++monotonic_bad;
      }
    }
  }
  c.expect(linearity_bad == 0, "linearity violations: " +
                                   std::to_string(linearity_bad));
  c.expect(boundary_bad == 0,
           "boundary identity violations: " + std::to_string(boundary_bad));
  c.expect(monotonic_bad == 0,
           "monotonicity violations: " + std::to_string(monotonic_bad));
  return c;
}

Check criterion_gate_soundness() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t verdict_bad = 0;

  for (std::uint64_t i = 0; i < 6000; ++i) {
    const std::size_t n = 1 + rng::draw_u64(7, 1, i) % 120;
    const double target = rng::unit(rng::draw_u64(7, 2, i));
    GateConfig config;
    config.alpha_target = target;
    config.theta = rng::unit(rng::draw_u64(7, 3, i));
    config.shadow_cycles = n;
    std::vector<ScoredPrediction> preds;
    std::vector<PairedDecision> pairs;
    for (std::size_t e = 0; e < n; ++e) {
      preds.push_back({"t", rng::unit(rng::draw_u64(7, 4, i * 131 + e)), "d"});
      const bool agree = rng::unit(rng::draw_u64(7, 5, i * 131 + e)) < 0.8;
      pairs.push_back(
          make_paired_decision("t", "a", agree ? "a" : "b"));
    }
    const auto off = offline_evaluate(preds, config);
    if ((off.verdict.outcome == VerdictOutcome::Pass) !=
        (off.alpha.alpha >= target)) {
      ++verdict_bad;
    }
    const auto sh = shadow_evaluate(pairs, config);
    if ((sh.verdict.outcome == VerdictOutcome::Pass) !=
        (sh.alpha.alpha >= target)) {
      ++verdict_bad;
    }
  }
  c.expect(verdict_bad == 0,
           "verdict soundness/completeness violations: " +
               std::to_string(verdict_bad));

  // event-sourcing replay over random legal walks
  std::uint64_t replay_bad = 0;
  for (std::uint64_t walk = 0; walk < 2000; ++walk) {
    GateState state = initial_gate_state();
    TimestampMs ts = 0;
    const std::size_t steps = 1 + rng::draw_u64(7, 6, walk) % 16;
    for (std::size_t s = 0; s < steps; ++s) {
      HistoryEntry e;
      e.phase = state.phase;
      const bool pass = rng::unit(rng::draw_u64(7, 7, walk * 37 + s)) < 0.55;
      e.outcome = (state.phase == GatePhase::Reengineering || pass)
                      ? VerdictOutcome::Pass
                      : VerdictOutcome::HisoaiFlag;
      if (state.phase != GatePhase::Reengineering) {
        e.alpha = make_alpha_estimate(pass ? 9 : 1, 10);
      }
      e.timestamp = ++ts;
      state = gate_advance(state, e);
    }
    const GateState replayed = replay_history(state.history);
    if (replayed.phase != state.phase ||
        replayed.reengineering_cycles != state.reengineering_cycles ||
        replayed.history.size() != state.history.size()) {
      ++replay_bad;
    }
  }
  c.expect(replay_bad == 0,
           "replay mismatches: " + std::to_string(replay_bad));

  // illegal transitions are rejected
  std::uint64_t illegal_ok = 0;
  for (GatePhase wrong : {GatePhase::ShadowEval, GatePhase::Deployed,
                          GatePhase::Reengineering}) {
    try {
      HistoryEntry e;
      e.phase = wrong;
      e.outcome = VerdictOutcome::Pass;
      e.alpha = make_alpha_estimate(1, 2);
      e.timestamp = 1;
      gate_advance(initial_gate_state(), e);
    } catch (const Error& err) {
      if (err.code() == Errc::IllegalTransition) ++illegal_ok;
    }
  }
  c.expect(illegal_ok == 3, "illegal transitions rejected");

  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 30.0, "runtime " + fmt(elapsed) + "s < 30s");
  return c;
}

Check criterion_streaming_batch_equivalence() {
  Check c;
  const auto events = simulate_operational(builtin_scenario("legacy-hisoai"));
  const AlphaEstimate batch = compute_alpha(events);
  const auto series = compute_alpha_windowed(
      events, {WindowUnit::Events, static_cast<std::int64_t>(events.size()),
               static_cast<std::int64_t>(events.size())});
  c.expect(series.size() == 1, "single all-covering window");
  if (series.size() == 1) {
    const AlphaEstimate& w = series[0].estimate;
    c.expect(w.alpha == batch.alpha && w.ai_alone_count == batch.ai_alone_count &&
                 w.total_count == batch.total_count &&
                 w.ci_low == batch.ci_low && w.ci_high == batch.ci_high,
             "windowed estimate equals batch exactly");
  }

  // service bytes == offline recomputation bytes over the persisted store
  test::TempDir dir("acc-equiv");
  ServiceConfig cfg;
  cfg.store_dir = dir.path();
  cfg.gate.alpha_target = 0.8;
  cfg.gate.monitor_window = {WindowUnit::Events, 1000, 1000};
  MonitorService service(cfg);
  const int port = service.start();
  httplib::Client client("127.0.0.1", port);
  WorkloadSpec spec = builtin_scenario("afhe-final");
  spec.n_tasks = 2500;
  const auto res = client.Post("/v1/events",
                               serialize_events(simulate_operational(spec)),
                               "application/x-ndjson");
  c.expect(res && res->status == 200, "fixture batch accepted");
  const auto http_alpha = client.Get("/v1/alpha");
  c.expect(static_cast<bool>(http_alpha), "GET /v1/alpha answers");
  if (http_alpha) {
    const auto offline_series = compute_alpha_windowed(
        EventStore(dir.path(), false).read(), cfg.gate.monitor_window);
    const std::string recomputed = render_windowed_machine(offline_series);
    c.expect(http_alpha->body == recomputed,
             "HTTP body is byte-identical to offline recomputation");

    std::istringstream in;
    std::ostringstream out, err;
    const int code =
        run_cli({"alpha", "--store", dir.path().string(), "--window", "1000ev",
                 "--stride", "1000ev", "--format", "machine"},
                in, out, err);
    c.expect(code == 0 && out.str() == http_alpha->body,
             "CLI rendering is byte-identical to the service");
  }
  service.stop();
  return c;
}

Check criterion_persistence() {
  Check c;

  // parse/serialize round-trip identity over a 1000-record fuzz corpus
  std::uint64_t roundtrip_bad = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const DecisionEvent e = test::fuzz_event(20250810, i);
    const std::string canonical = serialize_event(e);
    if (serialize_event(parse_event_line(canonical)) != canonical) {
      ++roundtrip_bad;
    }
  }
  c.expect(roundtrip_bad == 0,
           "round-trip mismatches: " + std::to_string(roundtrip_bad));

  // durability before acknowledgment across a forced restart
  test::TempDir dir("acc-persist");
  ServiceConfig cfg;
  cfg.store_dir = dir.path();
  cfg.gate.alpha_target = 0.8;
  cfg.gate.monitor_window = {WindowUnit::Events, 100, 100};
  std::vector<DecisionEvent> batch;
  for (int i = 0; i < 150; ++i) {
    batch.push_back(test::make_event(
        i % 3 == 0 ? Decider::HumanOnly : Decider::AiAlone, i,
        "p" + std::to_string(i)));
  }
  {
    MonitorService service(cfg);
    const int port = service.start();
    httplib::Client client("127.0.0.1", port);
    httplib::Headers headers{{"Idempotency-Key", "persist-1"}};
    const auto res = client.Post("/v1/events", headers,
                                 serialize_events(batch),
                                 "application/x-ndjson");
    c.expect(res && res->status == 200 &&
                 json::parse(res->body).at("accepted") == 150,
             "batch acknowledged");
    service.stop();
  }
  {
    MonitorService service(cfg);
    const int port = service.start();
    httplib::Client client("127.0.0.1", port);
    c.expect(EventStore(dir.path(), false).total_events() == 150,
             "acknowledged events survive the restart");

    // idempotent replay of the identical batch adds zero events
    httplib::Headers headers{{"Idempotency-Key", "persist-1"}};
    const auto replay = client.Post("/v1/events", headers,
                                    serialize_events(batch),
                                    "application/x-ndjson");
    c.expect(replay && replay->status == 200, "replay accepted as a request");
    if (replay) {
      const json j = json::parse(replay->body);
      c.expect(j.at("accepted") == 0 && j.at("duplicate").get<bool>(),
               "replay added zero events");
    }
    c.expect(EventStore(dir.path(), false).total_events() == 150,
             "store count unchanged after replay");
    service.stop();
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: afhe_acceptance <path-to-afhe-binary>\n";
    return 64;
  }
  g_afhe_bin = argv[1];

  const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"C1 HISOAI diagnosis reproduction (alpha 0.38, regime hisoai, <5s)",
       criterion_hisoai_diagnosis},
      {"C2 cost-share reproduction (>0.9, exact to 1e-9)",
       criterion_cost_share},
      {"C3 gate iteration reproduction (flag at 0.45 then pass at 0.85)",
       criterion_gate_iterations},
      {"C4 labor-shift reproduction (substitution >=0.9 then exactly 0)",
       criterion_labor_shift},
      {"C5 estimator concentration (1000 seeds, N=10000, <=1% beyond 4 sigma)",
       criterion_estimator_concentration},
      {"C6 cost-model properties (linearity, boundaries, monotonicity)",
       criterion_cost_properties},
      {"C7 gate soundness (verdicts, replay, illegal transitions)",
       criterion_gate_soundness},
      {"C8 streaming/batch equivalence (byte-identical machine form)",
       criterion_streaming_batch_equivalence},
      {"C9 persistence (round-trip, durability, idempotent replay)",
       criterion_persistence},
  };

  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Check result;
    try {
      result = run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    if (result.ok) {
      std::cout << "[PASS] " << name << "\n";
    } else {
      ++failures;
      std::cout << "[FAIL] " << name << " -- " << result.detail << "\n";
    }
  }
  std::cout << (failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: " + std::to_string(failures) +
                                    " criterion(s) failed")
            << "\n";
  return failures;
}
