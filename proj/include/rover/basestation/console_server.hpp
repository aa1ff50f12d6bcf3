#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "rover/basestation/bridge.hpp"

namespace rover::base {

inline constexpr std::uint16_t kDefaultConsolePort = 8080;

/// Local web endpoint for the operator console.
///
///   GET  /live     server-sent events; each event's data is one JSON object
///                  with a "type" of state, telemetry, status, ack or log
///   GET  /state    current bridge state as JSON
///   POST /command  JSON console command; 202 queued, 409 refused
///                  (e-stopped or disconnected), 400 malformed
///   GET  /         static console bundle from `ui_dir`, when given
class ConsoleServer {
 public:
  ConsoleServer(ConsoleBridge& bridge, std::optional<std::filesystem::path> ui_dir = std::nullopt);
  ~ConsoleServer();
  ConsoleServer(const ConsoleServer&) = delete;
  ConsoleServer& operator=(const ConsoleServer&) = delete;

  /// Binds and serves on a background thread. Port 0 picks a free port.
  /// Returns the bound port; throws std::runtime_error if binding fails.
  std::uint16_t start(const std::string& host, std::uint16_t port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rover::base
