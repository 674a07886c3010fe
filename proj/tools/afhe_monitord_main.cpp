#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "afhe/monitor_service.hpp"

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop = true; }

afhe::WindowSpec window_from_flags(std::int64_t window, std::int64_t stride,
                                   const std::string& unit) {
  afhe::WindowSpec spec;
  spec.unit = unit == "events" ? afhe::WindowUnit::Events
                               : afhe::WindowUnit::Milliseconds;
  spec.window = window;
  spec.stride = stride > 0 ? stride : window;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steady-state autonomy monitor (HTTP)", "afhe-monitord"};

  afhe::ServiceConfig config;
  std::int64_t window = 1000;
  std::int64_t stride = 0;
  std::string window_unit = "events";
  std::uint32_t breaches = 3;

  app.add_option("--host", config.host, "listen address");
  app.add_option("--port", config.port, "listen port (0 = pick a free one)");
  app.add_option("--store", config.store_dir, "event store directory")
      ->required();
  app.add_option("--target", config.gate.alpha_target, "alpha_target")
      ->required();
  app.add_option("--window", window, "rolling window size");
  app.add_option("--stride", stride, "rolling stride (default: window)");
  app.add_option("--window-unit", window_unit, "window unit")
      ->check(CLI::IsMember({"events", "milliseconds"}));
  app.add_option("--breaches", breaches,
                 "consecutive windows below target that trigger");

  CLI11_PARSE(app, argc, argv);

  config.gate.monitor_window = window_from_flags(window, stride, window_unit);
  config.gate.consecutive_breaches = breaches;

  try {
    afhe::MonitorService service(config);
    const int port = service.start();
    std::cout << "afhe-monitord listening on " << config.host << ":" << port
              << " (store " << config.store_dir.string() << ")\n";

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop) {
      std::this_thread::sleep_for(std::chrono::milliseconds(200));
    }
    service.stop();
  } catch (const afhe::Error& e) {
    std::cerr << "afhe-monitord: " << afhe::errc_name(e.code()) << ": "
              << e.what() << "\n";
    return 2;
  }
  return 0;
}
