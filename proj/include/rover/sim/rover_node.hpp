#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>

#include "rover/onboard/controller.hpp"
#include "rover/protocol/link.hpp"
#include "rover/protocol/session.hpp"
#include "rover/sim/scenario.hpp"

namespace rover::sim {

/// The rover as a network service: the onboard controller driving a
/// simulated plant, listening for one base station at a time on TCP and
/// streaming telemetry over UDP to the connected peer's telemetry port.
///
/// The scenario supplies the field (start pose, terrain, beacons, noise);
/// its scripted commands are ignored, commands come from the base station.
class RoverNode {
 public:
  RoverNode(Scenario plant, std::uint64_t seed, onboard::ControllerConfig config,
            const std::string& bind_host = "0.0.0.0");
  ~RoverNode();

  RoverNode(const RoverNode&) = delete;
  RoverNode& operator=(const RoverNode&) = delete;

  std::uint16_t control_port() const;

  /// Session events ("connected", "session ended") are written here.
  void log_to(std::ostream* log) { log_ = log; }

  static constexpr std::int64_t kTelemetryPeriodMs = 200;

  /// One control tick at the current simulated time, then advances the
  /// plant by the configured tick.
  void tick();

  /// Ticks in real time until `stop` becomes true.
  void run(const std::atomic<bool>& stop);

  bool connected() const;
  std::int64_t now_ms() const;
  const SimWorld& world() const { return world_; }
  const onboard::RoverState& state() const { return state_; }

 private:
  void accept_peer();
  void note(const std::string& line);

  onboard::ControllerConfig config_;
  SimWorld world_;
  onboard::RoverState state_;
  std::unique_ptr<proto::TcpListener> listener_;
  std::unique_ptr<proto::ControlSession> session_;
  std::unique_ptr<proto::DatagramChannel> telemetry_;
  std::unique_ptr<proto::TelemetryPublisher> publisher_;
  std::ostream* log_ = nullptr;
};

}  // namespace rover::sim
