#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rover/onboard/autonomy.hpp"
#include "rover/onboard/config.hpp"
#include "rover/onboard/orientation.hpp"
#include "rover/onboard/state.hpp"
#include "rover/protocol/message.hpp"

namespace rover::onboard {

/// Applies one inbound message. Every control message yields exactly one
/// Ack; motion commands are refused while e-stopped or while autonomy is
/// driving. EStop is never refused.
std::vector<proto::Message> handle_message(const proto::Message& msg, RoverState& state,
                                           const ControllerConfig& config);

/// Soft stop on control-link loss: zeroes drive and arm, faults an active
/// autonomy run with "link lost", and leaves the manual e-stop latch alone.
void failsafe_on_link_loss(RoverState& state);

/// Re-arms manual control after a new control session is established.
void on_link_restored(RoverState& state);

/// Zeroes every actuator when e-stopped. Applied after every state change.
void enforce_safety(RoverState& state);

/// Raw environmental sensor readings; an absent value means the sensor did
/// not respond this cycle.
struct SensorReadings {
  std::optional<double> co2_ppm;
  std::optional<double> co_ppm;
  std::optional<double> air_temp_c;
  std::optional<double> humidity_pct;
  std::optional<double> soil_temp_c;
  std::optional<double> soil_moisture;
  std::optional<nmea::GpsFix> fix;
  bool camera_online = false;
};

TelemetrySnapshot build_snapshot(const RoverState& state, const SensorReadings& sensors,
                                 std::int64_t t_ms);

/// Current draw per power section implied by the actuator state, parallel to
/// state.power.
std::vector<double> estimate_loads(const RoverState& state);

/// Inputs gathered for one control tick.
struct TickInputs {
  std::optional<nmea::GpsFix> fix;
  std::optional<geo::HeadingDeg> compass;
  std::optional<BeaconObservation> beacon;
  std::optional<ImuSample> imu;
};

/// One fixed-period control tick: orientation update, autonomy step when
/// active, safety enforcement, battery drain. Returns the actuator command.
DriveState control_tick(RoverState& state, const TickInputs& in, const ControllerConfig& config);

}  // namespace rover::onboard
