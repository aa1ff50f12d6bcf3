#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rover/onboard/orientation.hpp"
#include "rover/onboard/power.hpp"

namespace rover::onboard {

/// Tunables of the autonomy state machine.
struct AutonomyParams {
  double align_tolerance_deg = 10.0;
  double realign_error_deg = 60.0;       // TraverseGps falls back to AlignHeading past this
  double steer_gain = 0.5;               // degrees of steer per degree of heading error
  double cruise_throttle = 0.6;
  double approach_throttle = 0.3;        // VisionApproach creep speed
  double turn_throttle = 0.4;            // differential throttle for turning in place
  double vision_takeover_radius_m = 3.5;
  double arrival_radius_m = 1.0;
  int no_fix_limit = 40;                 // consecutive no-fix ticks before Fault
};

struct ControllerConfig {
  std::int64_t tick_ms = 50;
  double max_steer_deg = 35.0;
  double arm_payload_limit_kg = 5.0;
  double imu_time_constant_ms = kDefaultImuTimeConstantMs;
  AutonomyParams autonomy;

  std::uint16_t control_port = 7401;
  std::uint16_t telemetry_port = 7402;
  std::int64_t heartbeat_interval_ms = 500;
  std::int64_t watchdog_ms = 2000;

  std::vector<PowerSection> power = default_power_sections();
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys and
/// malformed values raise ConfigError naming the line. Keys:
///
///   tick_ms, max_steer_deg, arm_payload_limit_kg, imu_time_constant_ms,
///   align_tolerance_deg, realign_error_deg, steer_gain, cruise_throttle,
///   approach_throttle, turn_throttle, vision_takeover_radius_m,
///   arrival_radius_m, no_fix_limit, control_port, telemetry_port,
///   heartbeat_interval_ms, watchdog_ms,
///   power.<drive|compute|comms>.packs  = 10000x11.1, 10000x11.1   (mAh x V)
///   power.<drive|compute|comms>.series = true|false
///   power.<drive|compute|comms>.taps   = 12, 5
ControllerConfig parse_config(const std::string& text);

ControllerConfig load_config(const std::filesystem::path& path);

/// Config file to use: an explicit path wins, then $ROVER_CONFIG, then
/// `rover.conf` in the working directory if present. nullopt means defaults.
std::optional<std::filesystem::path> resolve_config_path(
    const std::optional<std::filesystem::path>& explicit_path);

}  // namespace rover::onboard
