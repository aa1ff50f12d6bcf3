#pragma once

#include <optional>

#include "rover/onboard/controller.hpp"
#include "rover/sim/world.hpp"

namespace rover::sim {

/// One tick of navigation sensors: a GGA sentence round-tripped through the
/// NMEA parser, a noisy compass, the beacon for `waypoint_index` and a level
/// IMU reporting the current yaw rate.
onboard::TickInputs sense(SimWorld& world, std::size_t waypoint_index);

/// Environmental sensor box readings around nominal field values.
onboard::SensorReadings read_environment(SimWorld& world, const std::optional<nmea::GpsFix>& fix);

}  // namespace rover::sim
