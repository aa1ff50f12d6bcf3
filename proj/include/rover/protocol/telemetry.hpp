#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rover/nmea.hpp"

namespace rover {

struct Orientation {
  double roll_deg = 0.0;
  double pitch_deg = 0.0;
  double yaw_deg = 0.0;

  friend bool operator==(const Orientation&, const Orientation&) = default;
};

enum class AutonomyTag { Idle, AlignHeading, TraverseGps, VisionApproach, Arrived, Fault };

enum class PowerSectionId { Drive, Compute, Comms };

struct PowerReading {
  PowerSectionId section = PowerSectionId::Drive;
  double bus_v = 0.0;
  double charge_fraction = 1.0;
  std::vector<double> taps_v;  // regulated outputs, if the section has a converter

  friend bool operator==(const PowerReading&, const PowerReading&) = default;
};

/// One timestamped aggregation of every onboard reading. Sensor fields are
/// absent when the sensor did not report; they are never filled with guesses.
struct TelemetrySnapshot {
  std::int64_t t_ms = 0;

  std::optional<double> co2_ppm;
  std::optional<double> co_ppm;
  std::optional<double> air_temp_c;
  std::optional<double> humidity_pct;   // [0, 100]
  std::optional<double> soil_temp_c;
  std::optional<double> soil_moisture;  // [0, 1]

  std::optional<Orientation> orientation;
  std::optional<nmea::GpsFix> fix;

  AutonomyTag autonomy = AutonomyTag::Idle;
  int waypoint_index = 0;
  std::optional<std::string> fault_reason;

  std::vector<PowerReading> power;
  bool estopped = false;
  double arm_payload_kg = 0.0;
  bool arm_overload = false;
  bool camera_online = false;  // video is carried elsewhere; only its status travels here

  friend bool operator==(const TelemetrySnapshot&, const TelemetrySnapshot&) = default;
};

const char* to_string(AutonomyTag tag);
const char* to_string(PowerSectionId id);

}  // namespace rover
