#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "afhe/event_store.hpp"
#include "afhe/gate_engine.hpp"

namespace afhe {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 = pick a free port
  std::filesystem::path store_dir;
  GateConfig gate;  // alpha_target, monitor window/stride, breach count
};

// One fired trigger with the evidence and config snapshot behind it.
struct AlertRecord {
  TimestampMs triggered_at = 0;
  ReengineeringTrigger trigger;
  double alpha_target = 0.0;
  WindowSpec window;
};

std::string serialize_alert(const AlertRecord& alert);
AlertRecord parse_alert(std::string_view line, std::size_t line_number = 1);

// Steady-state monitor for a deployed system. Accepts decision events over
// HTTP, keeps them in the event store (durable before acknowledgment),
// serves rolling alpha recomputed from the store, and advances the gate to
// Reengineering when the consecutive-breach rule fires. All metric and gate
// logic is delegated; the service owns transport and persistence only.
//
// Endpoints:
//   POST /v1/events   body: line-delimited records; Idempotency-Key header
//   GET  /v1/alpha    ?windows=k  most recent k rolling estimates
//   GET  /v1/gate     gate state snapshot + active alert
//   GET  /v1/healthz  liveness
//
// The gate state is replayed from <store>/gate_history.log. Breach
// monitoring is active only while the replayed phase is Deployed, matching
// the gate lifecycle; a fresh store starts in OfflineEval with monitoring
// off.
class MonitorService {
 public:
  explicit MonitorService(ServiceConfig config);
  ~MonitorService();

  MonitorService(const MonitorService&) = delete;
  MonitorService& operator=(const MonitorService&) = delete;

  // Binds, then serves on a background thread. Returns the bound port.
  int start();
  void stop();

  int port() const noexcept { return bound_port_; }

  // The exact bytes GET /v1/alpha returns; exposed so offline tooling can
  // assert byte-identity.
  std::string alpha_series_machine(std::optional<std::size_t> last_k) const;

  GateState gate_state() const;
  std::optional<AlertRecord> active_alert() const;

  static constexpr const char* kHistoryFileName = "gate_history.log";
  static constexpr const char* kAlertFileName = "alerts.log";

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int bound_port_ = 0;
};

}  // namespace afhe
