#include "afhe/monitor_service.hpp"

#include <chrono>
#include <fstream>

#include <httplib.h>
#include <json.hpp>

#include "afhe/core_metrics.hpp"
#include "afhe/event_ingest.hpp"
#include "afhe/reporting.hpp"

namespace afhe {

namespace {

using nlohmann::json;

TimestampMs now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

json rejection_to_json(const LineRejection& r) {
  json j;
  j["error"] = errc_name(r.code);
  j["line"] = r.line;
  if (!r.field.empty()) j["field"] = r.field;
  j["message"] = r.message;
  return j;
}

}  // namespace

std::string serialize_alert(const AlertRecord& alert) {
  json j;
  j["alpha_target"] = alert.alpha_target;
  j["breached_alphas"] = alert.trigger.breached_alphas;
  j["first_window_start"] = alert.trigger.first_window_start;
  j["last_window_start"] = alert.trigger.last_window_start;
  j["stride"] = alert.window.stride;
  j["triggered_at"] = alert.triggered_at;
  j["window"] = alert.window.window;
  j["window_unit"] =
      alert.window.unit == WindowUnit::Events ? "events" : "milliseconds";
  return j.dump();
}

AlertRecord parse_alert(std::string_view line, std::size_t line_number) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(Errc::SyntaxError, "alert line is not a JSON object")
        .with_line(line_number);
  }
  AlertRecord a;
  try {
    a.alpha_target = j.at("alpha_target").get<double>();
    a.trigger.alpha_target = a.alpha_target;
    a.trigger.breached_alphas =
        j.at("breached_alphas").get<std::vector<double>>();
    a.trigger.first_window_start = j.at("first_window_start").get<TimestampMs>();
    a.trigger.last_window_start = j.at("last_window_start").get<TimestampMs>();
    a.triggered_at = j.at("triggered_at").get<TimestampMs>();
    a.window.window = j.at("window").get<std::int64_t>();
    a.window.stride = j.at("stride").get<std::int64_t>();
    a.window.unit = j.at("window_unit").get<std::string>() == "events"
                        ? WindowUnit::Events
                        : WindowUnit::Milliseconds;
  } catch (const json::exception& e) {
    throw Error(Errc::MissingField, std::string("malformed alert: ") + e.what())
        .with_line(line_number);
  }
  return a;
}

struct MonitorService::Impl {
  explicit Impl(ServiceConfig cfg)
      : config(std::move(cfg)), store(config.store_dir, true) {
    validate_gate_config(config.gate);
    gate_state =
        replay_history(load_gate_history(config.store_dir / kHistoryFileName));
    if (gate_state.phase == GatePhase::Reengineering) {
      load_last_alert();
    }
  }

  void load_last_alert() {
    std::ifstream in(config.store_dir / kAlertFileName, std::ios::binary);
    if (!in) return;
    std::string line, last;
    std::size_t line_number = 0, last_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      if (!line.empty()) {
        last = line;
        last_number = line_number;
      }
    }
    if (!last.empty()) alert = parse_alert(last, last_number);
  }

  std::vector<WindowedAlpha> windowed_series() const {
    return compute_alpha_windowed(store.read(), config.gate.monitor_window);
  }

  // Fires the re-engineering transition when the persisted series breaches
  // the target for enough consecutive windows. Caller holds state_mutex.
  void check_breach_locked() {
    if (gate_state.phase != GatePhase::Deployed) return;
    const auto series = windowed_series();
    const auto trigger = steady_state_check(series, config.gate);
    if (!trigger) return;

    HistoryEntry entry;
    entry.phase = GatePhase::Deployed;
    entry.outcome = VerdictOutcome::HisoaiFlag;
    entry.reason =
        "operational alpha stayed below target; AI re-engineering/retraining "
        "triggered";
    for (const auto& w : series) {
      if (w.window_start == trigger->last_window_start) {
        entry.alpha = w.estimate;
        break;
      }
    }
    entry.timestamp = now_ms();
    if (!gate_state.history.empty() &&
        entry.timestamp <= gate_state.history.back().timestamp) {
      entry.timestamp = gate_state.history.back().timestamp + 1;
    }
    gate_state = gate_advance(gate_state, entry);
    append_gate_history(config.store_dir / kHistoryFileName, entry);

    AlertRecord record;
    record.triggered_at = entry.timestamp;
    record.trigger = *trigger;
    record.alpha_target = config.gate.alpha_target;
    record.window = config.gate.monitor_window;
    alert = record;
    std::ofstream out(config.store_dir / kAlertFileName,
                      std::ios::binary | std::ios::app);
    out << serialize_alert(record) << '\n';
  }

  void handle_post_events(const httplib::Request& req, httplib::Response& res) {
    BatchParse batch = parse_event_lines(req.body);
    json body;
    json rejected = json::array();
    for (const auto& r : batch.rejected) rejected.push_back(rejection_to_json(r));

    if (batch.line_count == 0) {
      body["error"] = errc_name(Errc::SyntaxError);
      body["message"] = "batch holds no records";
      res.status = 400;
      res.set_content(body.dump() + "\n", "application/json");
      return;
    }
    if (batch.events.empty()) {
      body["error"] = errc_name(Errc::SyntaxError);
      body["message"] = "no valid records in batch";
      body["rejected"] = std::move(rejected);
      res.status = 400;
      res.set_content(body.dump() + "\n", "application/json");
      return;
    }

    std::optional<std::string> key;
    if (req.has_header("Idempotency-Key")) {
      key = req.get_header_value("Idempotency-Key");
    }

    AppendReceipt receipt;
    {
      std::lock_guard lock(write_mutex);
      receipt = store.append(batch.events, key);
    }
    {
      std::lock_guard lock(state_mutex);
      check_breach_locked();
    }

    body["accepted"] = receipt.appended;
    body["duplicate"] = receipt.duplicate;
    body["manifest_version"] = receipt.manifest_version;
    body["rejected"] = std::move(rejected);
    res.status = 200;
    res.set_content(body.dump() + "\n", "application/json");
  }

  void handle_get_alpha(const httplib::Request& req, httplib::Response& res) {
    std::optional<std::size_t> last_k;
    if (req.has_param("windows")) {
      try {
        last_k = std::stoull(req.get_param_value("windows"));
      } catch (const std::exception&) {
        res.status = 400;
        res.set_content(
            json{{"error", "UsageError"},
                 {"message", "windows must be a non-negative integer"}}
                    .dump() +
                "\n",
            "application/json");
        return;
      }
    }
    res.status = 200;
    res.set_content(alpha_series_machine(last_k), "application/json");
  }

  std::string alpha_series_machine(std::optional<std::size_t> last_k) const {
    auto series = windowed_series();
    if (last_k && series.size() > *last_k) {
      series.erase(series.begin(),
                   series.end() - static_cast<std::ptrdiff_t>(*last_k));
    }
    return render_windowed_machine(series);
  }

  void handle_get_gate(httplib::Response& res) {
    std::lock_guard lock(state_mutex);
    check_breach_locked();
    json j;
    j["alert"] = nullptr;
    if (alert) j["alert"] = json::parse(serialize_alert(*alert));
    j["alpha_target"] = config.gate.alpha_target;
    j["history_length"] = gate_state.history.size();
    j["monitoring_active"] = gate_state.phase == GatePhase::Deployed;
    j["phase"] = gate_phase_token(gate_state.phase);
    j["reengineering_cycles"] = gate_state.reengineering_cycles;
    res.status = 200;
    res.set_content(j.dump() + "\n", "application/json");
  }

  void setup_routes() {
    server.Post("/v1/events",
                [this](const httplib::Request& req, httplib::Response& res) {
                  try {
                    handle_post_events(req, res);
                  } catch (const Error& e) {
                    const bool io = e.code() == Errc::IoError ||
                                    e.code() == Errc::CorruptSegment;
                    res.status = io ? 500 : 400;
                    res.set_content(json{{"error", errc_name(e.code())},
                                         {"message", e.what()}}
                                            .dump() +
                                        "\n",
                                    "application/json");
                  }
                });
    server.Get("/v1/alpha",
               [this](const httplib::Request& req, httplib::Response& res) {
                 try {
                   handle_get_alpha(req, res);
                 } catch (const Error& e) {
                   res.status = 500;
                   res.set_content(json{{"error", errc_name(e.code())},
                                        {"message", e.what()}}
                                           .dump() +
                                       "\n",
                                   "application/json");
                 }
               });
    server.Get("/v1/gate",
               [this](const httplib::Request&, httplib::Response& res) {
                 try {
                   handle_get_gate(res);
                 } catch (const Error& e) {
                   res.status = 500;
                   res.set_content(json{{"error", errc_name(e.code())},
                                        {"message", e.what()}}
                                           .dump() +
                                       "\n",
                                   "application/json");
                 }
               });
    server.Get("/v1/healthz",
               [](const httplib::Request&, httplib::Response& res) {
                 res.status = 200;
                 res.set_content("{\"status\":\"ok\"}\n", "application/json");
               });
  }

  ServiceConfig config;
  EventStore store;
  GateState gate_state;
  std::optional<AlertRecord> alert;
  std::mutex write_mutex;          // store appends: single writer
  mutable std::mutex state_mutex;  // gate state + alert snapshot
  httplib::Server server;
  std::thread thread;
};

MonitorService::MonitorService(ServiceConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {
  impl_->setup_routes();
}

MonitorService::~MonitorService() { stop(); }

int MonitorService::start() {
  auto& impl = *impl_;
  if (impl.config.port == 0) {
    bound_port_ = impl.server.bind_to_any_port(impl.config.host);
    if (bound_port_ <= 0) {
      throw Error(Errc::IoError, "cannot bind to " + impl.config.host);
    }
  } else {
    if (!impl.server.bind_to_port(impl.config.host, impl.config.port)) {
      throw Error(Errc::IoError,
                  "cannot bind to " + impl.config.host + ":" +
                      std::to_string(impl.config.port));
    }
    bound_port_ = impl.config.port;
  }
  impl.thread = std::thread([&impl] { impl.server.listen_after_bind(); });
  impl.server.wait_until_ready();
  return bound_port_;
}

void MonitorService::stop() {
  if (!impl_) return;
  if (impl_->server.is_running()) impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string MonitorService::alpha_series_machine(
    std::optional<std::size_t> last_k) const {
  return impl_->alpha_series_machine(last_k);
}

GateState MonitorService::gate_state() const {
  std::lock_guard lock(impl_->state_mutex);
  return impl_->gate_state;
}

std::optional<AlertRecord> MonitorService::active_alert() const {
  std::lock_guard lock(impl_->state_mutex);
  return impl_->alert;
}

}  // namespace afhe
