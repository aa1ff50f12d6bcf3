#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rover/geodesy.hpp"
#include "rover/onboard/power.hpp"
#include "rover/protocol/message.hpp"
#include "rover/protocol/telemetry.hpp"

namespace rover::onboard {

inline constexpr int kWheelCount = 6;
/// Wheels 0..2 are the left side (front to rear), 3..5 the right side.
inline constexpr int kLeftWheels[] = {0, 1, 2};
inline constexpr int kRightWheels[] = {3, 4, 5};

struct DriveState {
  std::array<double, kWheelCount> wheel_throttle{};  // each in [-1, 1]
  double steer_deg = 0.0;                            // front wheels, within the steer limit
  bool estopped = false;

  /// Same throttle on every wheel.
  static DriveState uniform(double throttle, double steer_deg);
  /// Left and right sides at different throttles (skid turning).
  static DriveState differential(double left, double right, double steer_deg);

  bool all_zero() const;
  friend bool operator==(const DriveState&, const DriveState&) = default;
};

struct ArmState {
  std::array<double, proto::kArmJointCount> joint_rate{};
  double payload_kg = 0.0;
  bool overload = false;

  friend bool operator==(const ArmState&, const ArmState&) = default;
};

struct AutonomyState {
  AutonomyTag tag = AutonomyTag::Idle;
  std::vector<geo::GeoPoint> waypoints;
  std::size_t current_index = 0;
  std::optional<std::string> fault_reason;
  int no_fix_ticks = 0;

  bool active() const {
    return tag == AutonomyTag::AlignHeading || tag == AutonomyTag::TraverseGps ||
           tag == AutonomyTag::VisionApproach;
  }

  friend bool operator==(const AutonomyState&, const AutonomyState&) = default;
};

/// Everything the onboard control loop owns.
struct RoverState {
  DriveState drive;
  ArmState arm;
  AutonomyState autonomy;
  std::vector<PowerSection> power = default_power_sections();
  std::optional<Orientation> orientation;
  bool link_up = true;
  bool snapshot_requested = false;
  std::optional<proto::ScienceAction> last_science_action;
};

}  // namespace rover::onboard
