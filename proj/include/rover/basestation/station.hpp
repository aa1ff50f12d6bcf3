#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>

#include "rover/basestation/bridge.hpp"
#include "rover/protocol/link.hpp"
#include "rover/protocol/session.hpp"

namespace rover::base {

struct RoverAddress {
  std::string host;
  std::uint16_t port = proto::kDefaultControlPort;
};

/// Parses "host:port"; a bare host uses the default control port.
/// Throws std::invalid_argument on a malformed port.
RoverAddress parse_rover_address(const std::string& text);

struct StationOptions {
  RoverAddress rover;
  std::uint16_t telemetry_port = proto::kDefaultTelemetryPort;  // 0 picks a free port
  std::int64_t reconnect_ms = 1000;
  proto::SessionConfig session;
};

/// Base station network side: keeps a control session to the rover open
/// (reconnecting after a loss), feeds received telemetry into the bridge and
/// pumps the bridge's outbound queue.
class BaseStation {
 public:
  BaseStation(ConsoleBridge& bridge, StationOptions options);
  ~BaseStation();

  std::uint16_t telemetry_port() const;

  /// One pass at time `now_ms`: reconnect if due, pump commands, drain telemetry.
  void step(std::int64_t now_ms);

  /// Steps every `period_ms` of wall time until `stop` becomes true.
  void run(const std::atomic<bool>& stop, std::int64_t period_ms = 10);

 private:
  ConsoleBridge& bridge_;
  StationOptions options_;
  std::unique_ptr<proto::UdpSocket> telemetry_;
  std::unique_ptr<proto::TelemetryReceiver> receiver_;
  std::int64_t next_attempt_ms_ = 0;
};

}  // namespace rover::base
