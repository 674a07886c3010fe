#include "afhe/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "afhe/core_metrics.hpp"
#include "afhe/event_ingest.hpp"
#include "afhe/event_store.hpp"
#include "afhe/gate_engine.hpp"
#include "afhe/reporting.hpp"
#include "afhe/workload_sim.hpp"

namespace afhe {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFlagged = 1;
constexpr int kExitError = 2;

TimestampMs now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

struct CliContext {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  std::function<int()> action;
};

// Common input selection: a line-delimited log file ("-" = stdin) or an
// event store directory. AFHE_STORE supplies the store when no flag names
// an input.
struct InputOptions {
  std::string input;
  std::string store;
  std::string phase;
  std::string decider;
  std::optional<std::int64_t> since;
  std::optional<std::int64_t> until;
};

void add_input_flags(CLI::App* cmd, InputOptions& opts,
                     bool with_filters = false) {
  cmd->add_option("-i,--input", opts.input,
                  "line-delimited event log ('-' for stdin)");
  cmd->add_option("--store", opts.store,
                  "event store directory (default: $AFHE_STORE)");
  if (with_filters) {
    cmd->add_option("--phase", opts.phase, "filter: event phase")
        ->check(CLI::IsMember({"offline", "shadow", "operational"}));
    cmd->add_option("--decider", opts.decider, "filter: decider")
        ->check(CLI::IsMember(
            {"ai_alone", "ai_with_sync_human", "human_only"}));
    cmd->add_option("--since", opts.since,
                    "filter: minimum timestamp (ms, inclusive)");
    cmd->add_option("--until", opts.until,
                    "filter: maximum timestamp (ms, inclusive)");
  }
}

std::string resolve_store(const InputOptions& opts) {
  if (!opts.store.empty()) return opts.store;
  if (!opts.input.empty()) return {};
  const char* env = std::getenv("AFHE_STORE");
  return env ? env : "";
}

EventFilter filter_from(const InputOptions& opts) {
  EventFilter f;
  if (!opts.phase.empty()) f.phase = parse_phase_token(opts.phase);
  if (!opts.decider.empty()) f.decider = parse_decider_token(opts.decider);
  f.min_timestamp = opts.since;
  f.max_timestamp = opts.until;
  return f;
}

std::string slurp(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string read_input_text(const InputOptions& opts, std::istream& in) {
  if (opts.input.empty() || opts.input == "-") return slurp(in);
  std::ifstream file(opts.input, std::ios::binary);
  if (!file) {
    throw Error(Errc::IoError, "cannot open input file " + opts.input);
  }
  return slurp(file);
}

std::vector<DecisionEvent> load_events(const InputOptions& opts,
                                       std::istream& in) {
  const std::string store = resolve_store(opts);
  std::vector<DecisionEvent> events;
  if (!store.empty()) {
    events = EventStore(store, /*create_if_missing=*/false)
                 .read(filter_from(opts));
  } else {
    events = parse_event_log(read_input_text(opts, in));
    const EventFilter f = filter_from(opts);
    std::erase_if(events, [&](const DecisionEvent& e) {
      if (f.phase && e.phase != *f.phase) return true;
      if (f.decider && e.decider != *f.decider) return true;
      if (f.min_timestamp && e.timestamp < *f.min_timestamp) return true;
      if (f.max_timestamp && e.timestamp > *f.max_timestamp) return true;
      return false;
    });
  }
  return events;
}

// Window values take an optional unit suffix: "5000" or "5000ms" are
// milliseconds, "200ev" is an event count.
std::pair<std::int64_t, std::optional<WindowUnit>> parse_window_value(
    const std::string& text) {
  std::string digits = text;
  std::optional<WindowUnit> unit;
  if (digits.size() > 2 && digits.substr(digits.size() - 2) == "ms") {
    unit = WindowUnit::Milliseconds;
    digits.resize(digits.size() - 2);
  } else if (digits.size() > 2 && digits.substr(digits.size() - 2) == "ev") {
    unit = WindowUnit::Events;
    digits.resize(digits.size() - 2);
  }
  try {
    std::size_t used = 0;
    const std::int64_t value = std::stoll(digits, &used);
    if (used != digits.size()) throw std::invalid_argument(digits);
    return {value, unit};
  } catch (const std::exception&) {
    throw Error(Errc::InvalidWindow,
                "cannot parse window value \"" + text +
                    "\" (expected e.g. 5000, 5000ms or 200ev)");
  }
}

WindowSpec parse_window_spec(const std::string& window,
                             const std::string& stride) {
  auto [w, wu] = parse_window_value(window);
  WindowSpec spec;
  spec.unit = wu.value_or(WindowUnit::Milliseconds);
  spec.window = w;
  if (stride.empty()) {
    spec.stride = w;
    return spec;
  }
  auto [s, su] = parse_window_value(stride);
  if (su && wu && *su != *wu) {
    throw Error(Errc::InvalidWindow, "window and stride units differ");
  }
  if (su && !wu) spec.unit = *su;
  spec.stride = s;
  return spec;
}

bool machine(const std::string& format) { return format == "machine"; }

void add_format_flag(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "output rendering")
      ->check(CLI::IsMember({"text", "machine"}))
      ->default_val("text");
}

// Gate lifecycle persistence: with --history the evaluation also advances
// the replayed state and appends one record.
void record_transition(const std::string& history_path, GatePhase phase,
                       const std::optional<AlphaEstimate>& alpha,
                       VerdictOutcome outcome, const std::string& reason) {
  GateState state = replay_history(load_gate_history(history_path));
  HistoryEntry entry;
  entry.phase = phase;
  entry.alpha = alpha;
  entry.outcome = outcome;
  entry.reason = reason;
  entry.timestamp = now_ms();
  if (!state.history.empty() &&
      entry.timestamp <= state.history.back().timestamp) {
    entry.timestamp = state.history.back().timestamp + 1;
  }
  gate_advance(state, entry);  // validates the transition before we persist
  append_gate_history(history_path, entry);
}

int emit_evaluation(const PhaseEvaluation& eval, std::string_view label,
                    const std::string& format, std::ostream& out) {
  out << (machine(format) ? render_evaluation_machine(label, eval)
                          : render_evaluation_text(label, eval));
  return eval.verdict.outcome == VerdictOutcome::HisoaiFlag ? kExitFlagged
                                                            : kExitOk;
}

void setup_ingest(CLI::App& app, CliContext* ctx) {
  auto* cmd = app.add_subcommand("ingest", "append event records to a store");
  auto opts = std::make_shared<InputOptions>();
  auto skip_invalid = std::make_shared<bool>(false);
  auto format = std::make_shared<std::string>();
  add_input_flags(cmd, *opts);
  cmd->add_flag("--skip-invalid", *skip_invalid,
                "accept valid lines and report the rest instead of failing");
  add_format_flag(cmd, *format);
  cmd->callback([ctx, opts, skip_invalid, format] {
    ctx->action = [ctx, opts, skip_invalid, format] {
      std::string store = resolve_store(*opts);
      if (store.empty()) {
        throw Error(Errc::InvalidConfig, "ingest needs --store or AFHE_STORE");
      }
      const std::string text = read_input_text(*opts, ctx->in);
      BatchParse batch = parse_event_lines(text);
      if (!*skip_invalid && !batch.rejected.empty()) {
        const auto& r = batch.rejected.front();
        Error e(r.code, r.message);
        e.with_line(r.line);
        if (!r.field.empty()) e.with_field(r.field);
        throw e;
      }
      EventStore es(store, /*create_if_missing=*/true);
      const AppendReceipt receipt = es.append(batch.events);
      if (machine(*format)) {
        json j;
        j["accepted"] = receipt.appended;
        j["manifest_version"] = receipt.manifest_version;
        j["rejected"] = batch.rejected.size();
        ctx->out << j.dump() << "\n";
      } else {
        ctx->out << "accepted " << receipt.appended << " event(s), manifest v"
                 << receipt.manifest_version << "\n";
        if (!batch.rejected.empty()) {
          ctx->out << "rejected " << batch.rejected.size() << " line(s)\n";
        }
      }
      for (const auto& r : batch.rejected) {
        json j;
        j["error"] = errc_name(r.code);
        j["line"] = r.line;
        if (!r.field.empty()) j["field"] = r.field;
        j["message"] = r.message;
        ctx->err << j.dump() << "\n";
      }
      return kExitOk;
    };
  });
}

void setup_alpha(CLI::App& app, CliContext* ctx) {
  auto* cmd =
      app.add_subcommand("alpha", "autonomy coefficient over a decision log");
  auto opts = std::make_shared<InputOptions>();
  auto window = std::make_shared<std::string>();
  auto stride = std::make_shared<std::string>();
  auto windows = std::make_shared<std::int64_t>(0);
  auto format = std::make_shared<std::string>();
  add_input_flags(cmd, *opts, /*with_filters=*/true);
  cmd->add_option("--window", *window, "rolling window (e.g. 5000ms, 200ev)");
  cmd->add_option("--stride", *stride, "rolling stride (default: window)");
  cmd->add_option("--windows", *windows, "keep only the last K windows");
  add_format_flag(cmd, *format);
  cmd->callback([ctx, opts, window, stride, windows, format] {
    ctx->action = [ctx, opts, window, stride, windows, format] {
      const auto events = load_events(*opts, ctx->in);
      if (window->empty()) {
        const AlphaEstimate est = compute_alpha(events);
        ctx->out << (machine(*format) ? render_alpha_machine(est)
                                      : render_alpha_text(est));
        return kExitOk;
      }
      auto series =
          compute_alpha_windowed(events, parse_window_spec(*window, *stride));
      if (*windows > 0 && series.size() > static_cast<std::size_t>(*windows)) {
        series.erase(series.begin(),
                     series.end() - static_cast<std::ptrdiff_t>(*windows));
      }
      ctx->out << (machine(*format) ? render_windowed_machine(series)
                                    : render_windowed_text(series));
      return kExitOk;
    };
  });
}

void setup_cost(CLI::App& app, CliContext* ctx) {
  auto* cmd = app.add_subcommand("cost", "operational cost model evaluation");
  auto opts = std::make_shared<InputOptions>();
  auto model = std::make_shared<CostModel>();
  auto alpha = std::make_shared<double>(-1.0);
  auto n = std::make_shared<std::uint64_t>(0);
  auto format = std::make_shared<std::string>();
  add_input_flags(cmd, *opts);
  cmd->add_option("--tau-a", model->tau_a, "AI cost per decision")->required();
  cmd->add_option("--tau-h", model->tau_h, "human cost per decision")
      ->required();
  cmd->add_option("--gamma", model->gamma, "review frequency for AI decisions");
  cmd->add_option("--tau-review-a", model->tau_review_a,
                  "cost per asynchronous review");
  cmd->add_option("--alpha", *alpha, "use this alpha instead of a log");
  cmd->add_option("-n,--n", *n, "task count (required with --alpha)");
  add_format_flag(cmd, *format);
  cmd->callback([ctx, opts, model, alpha, n, format] {
    ctx->action = [ctx, opts, model, alpha, n, format] {
      CostBreakdown cost;
      cost.model = *model;
      if (*alpha >= 0.0) {
        if (*n == 0) {
          throw Error(Errc::InvalidConfig, "--alpha also needs --n");
        }
        cost.n = *n;
        cost.total = total_cost(*model, *alpha, *n);
        cost.human_share = human_cost_share(*model, *alpha);
      } else {
        const auto events = load_events(*opts, ctx->in);
        const AlphaEstimate est = compute_alpha(events);
        cost.n = *n > 0 ? *n : events.size();
        cost.total = total_cost(*model, est.alpha, cost.n);
        cost.human_share = human_cost_share(*model, est.alpha);
      }
      cost.per_task = cost.total / static_cast<double>(cost.n);
      ctx->out << (machine(*format) ? render_cost_machine(cost)
                                    : render_cost_text(cost));
      return kExitOk;
    };
  });
}

void setup_regime(CLI::App& app, CliContext* ctx) {
  auto* cmd = app.add_subcommand(
      "regime", "classify HISOAI / transitional / ideal HITL");
  auto opts = std::make_shared<InputOptions>();
  auto alpha = std::make_shared<double>(-1.0);
  auto hisoai = std::make_shared<double>(kDefaultHisoaiThreshold);
  auto floor = std::make_shared<double>(kDefaultIdealFloor);
  auto format = std::make_shared<std::string>();
  add_input_flags(cmd, *opts);
  cmd->add_option("--alpha", *alpha, "classify this alpha instead of a log");
  cmd->add_option("--hisoai-threshold", *hisoai, "HISOAI boundary");
  cmd->add_option("--ideal-floor", *floor, "ideal-HITL boundary");
  add_format_flag(cmd, *format);
  cmd->callback([ctx, opts, alpha, hisoai, floor, format] {
    ctx->action = [ctx, opts, alpha, hisoai, floor, format] {
      double value = *alpha;
      if (value < 0.0) {
        value = compute_alpha(load_events(*opts, ctx->in)).alpha;
      }
      const RegimeClassification rc = classify_regime(value, *hisoai, *floor);
      ctx->out << (machine(*format) ? render_regime_machine(rc)
                                    : render_regime_text(rc));
      // A HISOAI diagnosis is the condition CI pipelines gate on.
      return rc.regime == Regime::Hisoai ? kExitFlagged : kExitOk;
    };
  });
}

void setup_gate_offline(CLI::App* gate, CliContext* ctx) {
  auto* cmd = gate->add_subcommand("offline",
                                   "phase I: confidence-thresholded autonomy");
  auto opts = std::make_shared<InputOptions>();
  auto target = std::make_shared<double>();
  auto theta = std::make_shared<double>();
  auto history = std::make_shared<std::string>();
  auto format = std::make_shared<std::string>();
  add_input_flags(cmd, *opts);
  cmd->add_option("--target", *target, "alpha_target")->required();
  cmd->add_option("--theta", *theta, "confidence threshold")->required();
  cmd->add_option("--history", *history, "gate history file to advance");
  add_format_flag(cmd, *format);
  cmd->callback([ctx, opts, target, theta, history, format] {
    ctx->action = [ctx, opts, target, theta, history, format] {
      GateConfig config;
      config.alpha_target = *target;
      config.theta = *theta;
      const auto events = load_events(*opts, ctx->in);
      const auto predictions = predictions_from_events(events);
      const PhaseEvaluation eval = offline_evaluate(predictions, config);
      if (!history->empty()) {
        record_transition(*history, GatePhase::OfflineEval, eval.alpha,
                          eval.verdict.outcome, eval.verdict.reason);
      }
      return emit_evaluation(eval, "offline", *format, ctx->out);
    };
  });
}

void setup_gate_shadow(CLI::App* gate, CliContext* ctx) {
  auto* cmd = gate->add_subcommand(
      "shadow", "phase II: blind human agreement in shadow mode");
  auto opts = std::make_shared<InputOptions>();
  auto target = std::make_shared<double>();
  auto cycles = std::make_shared<std::uint64_t>(0);
  auto history = std::make_shared<std::string>();
  auto format = std::make_shared<std::string>();
  add_input_flags(cmd, *opts);
  cmd->add_option("--target", *target, "alpha_target")->required();
  cmd->add_option("--cycles", *cycles, "expected shadow cycle count M");
  cmd->add_option("--history", *history, "gate history file to advance");
  add_format_flag(cmd, *format);
  cmd->callback([ctx, opts, target, cycles, history, format] {
    ctx->action = [ctx, opts, target, cycles, history, format] {
      const auto events = load_events(*opts, ctx->in);
      const auto pairs = pairs_from_events(events);
      GateConfig config;
      config.alpha_target = *target;
      config.shadow_cycles = *cycles > 0 ? *cycles : std::max<std::size_t>(
                                                         pairs.size(), 1);
      const PhaseEvaluation eval = shadow_evaluate(pairs, config);
      if (eval.warning) {
        ctx->err << json{{"warning", *eval.warning}}.dump() << "\n";
      }
      if (!history->empty()) {
        record_transition(*history, GatePhase::ShadowEval, eval.alpha,
                          eval.verdict.outcome, eval.verdict.reason);
      }
      return emit_evaluation(eval, "shadow", *format, ctx->out);
    };
  });
}

void setup_gate_monitor(CLI::App* gate, CliContext* ctx) {
  auto* cmd = gate->add_subcommand(
      "monitor", "steady state: consecutive-breach re-engineering check");
  auto opts = std::make_shared<InputOptions>();
  auto target = std::make_shared<double>();
  auto window = std::make_shared<std::string>();
  auto stride = std::make_shared<std::string>();
  auto breaches = std::make_shared<std::uint32_t>(3);
  auto history = std::make_shared<std::string>();
  auto format = std::make_shared<std::string>();
  add_input_flags(cmd, *opts);
  cmd->add_option("--target", *target, "alpha_target")->required();
  cmd->add_option("--window", *window, "rolling window")->required();
  cmd->add_option("--stride", *stride, "rolling stride (default: window)");
  cmd->add_option("--breaches", *breaches,
                  "consecutive windows below target that trigger");
  cmd->add_option("--history", *history, "gate history file to advance");
  add_format_flag(cmd, *format);
  cmd->callback([ctx, opts, target, window, stride, breaches, history,
                 format] {
    ctx->action = [ctx, opts, target, window, stride, breaches, history,
                   format] {
      GateConfig config;
      config.alpha_target = *target;
      config.consecutive_breaches = *breaches;
      config.monitor_window = parse_window_spec(*window, *stride);
      const auto events = load_events(*opts, ctx->in);
      const auto series = compute_alpha_windowed(events, config.monitor_window);
      const auto trigger = steady_state_check(series, config);
      if (trigger && !history->empty()) {
        const auto it = std::find_if(
            series.begin(), series.end(), [&](const WindowedAlpha& w) {
              return w.window_start == trigger->last_window_start;
            });
        record_transition(
            *history, GatePhase::Deployed,
            it != series.end() ? std::optional<AlphaEstimate>(it->estimate)
                               : std::nullopt,
            VerdictOutcome::HisoaiFlag,
            "operational alpha stayed below target; AI re-engineering/"
            "retraining triggered");
      }
      ctx->out << (machine(*format) ? render_trigger_machine(trigger)
                                    : render_trigger_text(trigger));
      return trigger ? kExitFlagged : kExitOk;
    };
  });
}

void setup_gate_resume(CLI::App* gate, CliContext* ctx) {
  auto* cmd = gate->add_subcommand(
      "resume", "leave re-engineering and restart offline evaluation");
  auto history = std::make_shared<std::string>();
  auto note = std::make_shared<std::string>("re-engineering complete");
  cmd->add_option("--history", *history, "gate history file to advance")
      ->required();
  cmd->add_option("--note", *note, "reason recorded with the resume");
  cmd->callback([ctx, history, note] {
    ctx->action = [ctx, history, note] {
      record_transition(*history, GatePhase::Reengineering, std::nullopt,
                        VerdictOutcome::Pass, *note);
      ctx->out << "gate resumed to offline_eval\n";
      return kExitOk;
    };
  });
}

void setup_gate(CLI::App& app, CliContext* ctx) {
  auto* gate = app.add_subcommand("gate", "AFHE deployment gate phases");
  gate->require_subcommand(1);
  setup_gate_offline(gate, ctx);
  setup_gate_shadow(gate, ctx);
  setup_gate_monitor(gate, ctx);
  setup_gate_resume(gate, ctx);
}

void setup_simulate(CLI::App& app, CliContext* ctx) {
  auto* cmd =
      app.add_subcommand("simulate", "generate a synthetic decision workload");
  auto scenario = std::make_shared<std::string>();
  auto spec_file = std::make_shared<std::string>();
  auto seed = std::make_shared<std::int64_t>(-1);
  auto n = std::make_shared<std::uint64_t>(0);
  auto phase = std::make_shared<std::string>("operational");
  auto out_file = std::make_shared<std::string>();
  cmd->add_option("--scenario", *scenario, "built-in scenario name");
  cmd->add_option("--spec", *spec_file, "workload spec JSON file");
  cmd->add_option("--seed", *seed, "override the spec seed");
  cmd->add_option("-n,--n", *n, "override the task count");
  cmd->add_option("--phase", *phase, "stream kind to generate")
      ->check(CLI::IsMember({"operational", "offline", "shadow"}));
  cmd->add_option("-o,--out", *out_file, "write to file instead of stdout");
  cmd->callback([ctx, scenario, spec_file, seed, n, phase, out_file] {
    ctx->action = [ctx, scenario, spec_file, seed, n, phase, out_file] {
      WorkloadSpec spec;
      if (!spec_file->empty()) {
        std::ifstream f(*spec_file, std::ios::binary);
        if (!f) {
          throw Error(Errc::IoError, "cannot open spec file " + *spec_file);
        }
        spec = workload_spec_from_json_text(slurp(f));
      } else if (!scenario->empty()) {
        spec = builtin_scenario(*scenario);
      } else {
        throw Error(Errc::InvalidConfig, "simulate needs --scenario or --spec");
      }
      if (*seed >= 0) spec.seed = static_cast<std::uint64_t>(*seed);
      if (*n > 0) spec.n_tasks = *n;

      std::vector<DecisionEvent> events;
      if (*phase == "offline") {
        events = simulate_offline_events(spec);
      } else if (*phase == "shadow") {
        events = simulate_shadow_events(spec);
      } else {
        events = simulate_operational(spec);
      }
      const std::string text = serialize_events(events);
      if (out_file->empty()) {
        ctx->out << text;
      } else {
        std::ofstream f(*out_file, std::ios::binary);
        if (!f) {
          throw Error(Errc::IoError, "cannot open output file " + *out_file);
        }
        f << text;
      }
      return kExitOk;
    };
  });
}

void setup_report(CLI::App& app, CliContext* ctx) {
  auto* cmd = app.add_subcommand(
      "report", "full audit report (alpha, regime, cost, labor)");
  auto opts = std::make_shared<InputOptions>();
  auto scenario = std::make_shared<std::string>();
  auto model = std::make_shared<CostModel>();
  auto hisoai = std::make_shared<double>(kDefaultHisoaiThreshold);
  auto floor = std::make_shared<double>(kDefaultIdealFloor);
  auto format = std::make_shared<std::string>();
  add_input_flags(cmd, *opts, /*with_filters=*/true);
  cmd->add_option("--scenario", *scenario,
                  "take cost parameters from this built-in scenario");
  auto* tau_a = cmd->add_option("--tau-a", model->tau_a, "AI cost");
  cmd->add_option("--tau-h", model->tau_h, "human cost")->needs(tau_a);
  cmd->add_option("--gamma", model->gamma, "review frequency")->needs(tau_a);
  cmd->add_option("--tau-review-a", model->tau_review_a, "review cost")
      ->needs(tau_a);
  cmd->add_option("--hisoai-threshold", *hisoai, "HISOAI boundary");
  cmd->add_option("--ideal-floor", *floor, "ideal-HITL boundary");
  add_format_flag(cmd, *format);
  cmd->callback([ctx, opts, scenario, model, hisoai, floor, format, tau_a] {
    const bool have_model = tau_a->count() > 0;
    ctx->action = [ctx, opts, scenario, model, have_model, hisoai, floor,
                   format] {
      std::optional<CostModel> cost_model;
      if (!scenario->empty()) {
        cost_model = builtin_scenario(*scenario).cost_model;
      } else if (have_model) {
        cost_model = *model;
      }
      const auto events = load_events(*opts, ctx->in);
      const ReportDocument doc =
          build_report(events, cost_model, *hisoai, *floor);
      ctx->out << (machine(*format) ? render_report_machine(doc)
                                    : render_report_text(doc));
      return doc.regime.regime == Regime::Hisoai ? kExitFlagged : kExitOk;
    };
  });
}

void setup_labor(CLI::App& app, CliContext* ctx) {
  auto* cmd = app.add_subcommand(
      "labor", "human labor allocation across empowered roles");
  auto opts = std::make_shared<InputOptions>();
  auto format = std::make_shared<std::string>();
  add_input_flags(cmd, *opts, /*with_filters=*/true);
  add_format_flag(cmd, *format);
  cmd->callback([ctx, opts, format] {
    ctx->action = [ctx, opts, format] {
      const auto events = load_events(*opts, ctx->in);
      const LaborAllocation labor = labor_report(events);
      ctx->out << (machine(*format) ? render_labor_machine(labor)
                                    : render_labor_text(labor));
      return kExitOk;
    };
  });
}

}  // namespace

int run_cli(std::vector<std::string> args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"HISOAI audit and AFHE deployment gate toolkit", "afhe"};
  app.require_subcommand(1);

  CliContext ctx{in, out, err, {}};

  setup_ingest(app, &ctx);
  setup_alpha(app, &ctx);
  setup_cost(app, &ctx);
  setup_regime(app, &ctx);
  setup_gate(app, &ctx);
  setup_simulate(app, &ctx);
  setup_report(app, &ctx);
  setup_labor(app, &ctx);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
    if (!ctx.action) {
      err << json{{"error", "UsageError"},
                  {"message", "no subcommand selected"}}
                 .dump()
          << "\n";
      return kExitError;
    }
    return ctx.action();
  } catch (const CLI::CallForHelp&) {
    CLI::App* deepest = &app;
    while (true) {
      const auto subs = deepest->get_subcommands();
      if (subs.empty()) break;
      deepest = subs.front();
    }
    out << deepest->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << json{{"error", "UsageError"}, {"message", e.what()}}.dump() << "\n";
    return kExitError;
  } catch (const Error& e) {
    json j;
    j["error"] = errc_name(e.code());
    j["message"] = e.what();
    if (e.line()) j["line"] = *e.line();
    if (e.field()) j["field"] = *e.field();
    err << j.dump() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << json{{"error", "InternalError"}, {"message", e.what()}}.dump()
        << "\n";
    return kExitError;
  }
}

}  // namespace afhe
