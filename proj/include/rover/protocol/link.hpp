#pragma once

#include <cstdint>
#include <optional>

#include "rover/protocol/codec.hpp"
#include "rover/protocol/transport.hpp"

namespace rover::proto {

/// Range thresholds of the base-station radio link.
struct LinkBudget {
  double full_strength_range_m = 900.0;
  double dropout_range_m = 1050.0;
  double degraded_loss_rate = 0.25;  // fraction of telemetry datagrams lost when degraded

  /// Throws std::invalid_argument unless 0 < full <= dropout and the loss
  /// rate lies in [0, 1].
  void validate() const;
};

enum class LinkQuality { Full, Degraded, Dead };

const char* to_string(LinkQuality q);

/// Full up to and including the full-strength range, Dead strictly beyond
/// the dropout range, Degraded in between.
LinkQuality link_quality(double distance_m, const LinkBudget& budget);

/// Fire-and-forget telemetry sender: one Telemetry frame per datagram.
class TelemetryPublisher {
 public:
  explicit TelemetryPublisher(DatagramChannel& channel) : channel_(channel) {}
  /// Returns the encoded frame that was handed to the channel.
  Bytes publish(const TelemetrySnapshot& snapshot);

 private:
  DatagramChannel& channel_;
};

/// Latest-wins telemetry intake. Corrupt datagrams and snapshots older than
/// the newest one seen are skipped.
class TelemetryReceiver {
 public:
  explicit TelemetryReceiver(DatagramChannel& channel) : channel_(channel) {}

  /// Drains the channel; returns true if a newer snapshot arrived.
  bool poll();

  const std::optional<TelemetrySnapshot>& latest() const { return latest_; }
  std::uint64_t received() const { return received_; }
  std::uint64_t rejected() const { return rejected_; }

 private:
  DatagramChannel& channel_;
  std::optional<TelemetrySnapshot> latest_;
  std::uint64_t received_ = 0;
  std::uint64_t rejected_ = 0;
};

}  // namespace rover::proto
