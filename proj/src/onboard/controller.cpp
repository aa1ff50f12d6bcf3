#include "rover/onboard/controller.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

namespace rover::onboard {

DriveState DriveState::uniform(double throttle, double steer) {
  DriveState d;
  d.wheel_throttle.fill(throttle);
  d.steer_deg = steer;
  return d;
}

DriveState DriveState::differential(double left, double right, double steer) {
  DriveState d;
  for (int i : kLeftWheels) d.wheel_throttle[i] = left;
  for (int i : kRightWheels) d.wheel_throttle[i] = right;
  d.steer_deg = steer;
  return d;
}

bool DriveState::all_zero() const {
  return steer_deg == 0.0 &&
         std::all_of(wheel_throttle.begin(), wheel_throttle.end(), [](double t) { return t == 0.0; });
}

namespace {

void zero_actuators(RoverState& s) {
  s.drive.wheel_throttle.fill(0.0);
  s.drive.steer_deg = 0.0;
  s.arm.joint_rate.fill(0.0);
}

void stop_autonomy(RoverState& s, AutonomyTag tag, std::optional<std::string> reason) {
  s.autonomy.tag = tag;
  s.autonomy.fault_reason = std::move(reason);
  s.autonomy.no_fix_ticks = 0;
}

DriveState limit(DriveState d, double max_steer) {
  for (double& t : d.wheel_throttle) t = std::clamp(t, -1.0, 1.0);
  d.steer_deg = std::clamp(d.steer_deg, -max_steer, max_steer);
  return d;
}

}  // namespace

void enforce_safety(RoverState& state) {
  if (state.drive.estopped) zero_actuators(state);
  state.arm.overload = state.arm.payload_kg > 5.0;
}

std::vector<proto::Message> handle_message(const proto::Message& msg, RoverState& state,
                                           const ControllerConfig& config) {
  using namespace proto;
  if (!is_control(msg)) return {};  // acks, telemetry and heartbeats need no action

  const bool accepted = std::visit(
      [&](const auto& m) -> bool {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, EStop>) {
          state.drive.estopped = true;
          if (state.autonomy.active()) stop_autonomy(state, AutonomyTag::Fault, "e-stop");
          return true;
        } else if constexpr (std::is_same_v<T, ClearEStop>) {
          state.drive.estopped = false;
          return true;
        } else if constexpr (std::is_same_v<T, Drive>) {
          if (state.drive.estopped || state.autonomy.active()) return false;
          const bool estopped = state.drive.estopped;
          state.drive = limit(DriveState::uniform(m.throttle, m.steer_deg), config.max_steer_deg);
          state.drive.estopped = estopped;
          return true;
        } else if constexpr (std::is_same_v<T, ArmJoint>) {
          if (state.drive.estopped) return false;
          state.arm.joint_rate[static_cast<std::size_t>(m.joint)] = std::clamp(m.rate, -1.0, 1.0);
          return true;
        } else if constexpr (std::is_same_v<T, SetWaypoints>) {
          if (state.autonomy.active()) return false;
          state.autonomy = AutonomyState{};
          state.autonomy.waypoints = m.points;
          return true;
        } else if constexpr (std::is_same_v<T, StartAutonomy>) {
          if (state.drive.estopped || state.autonomy.active() || state.autonomy.waypoints.empty())
            return false;
          state.autonomy.current_index = 0;
          stop_autonomy(state, AutonomyTag::AlignHeading, std::nullopt);
          return true;
        } else if constexpr (std::is_same_v<T, AbortAutonomy>) {
          if (state.autonomy.active()) {
            stop_autonomy(state, AutonomyTag::Idle, std::nullopt);
            state.autonomy.current_index = 0;
            zero_actuators(state);
          }
          return true;
        } else if constexpr (std::is_same_v<T, ScienceCommand>) {
          if (m.action == ScienceAction::Drill && state.drive.estopped) return false;
          state.last_science_action = m.action;
          if (m.action == ScienceAction::ReadSensors) state.snapshot_requested = true;
          return true;
        } else {
          return false;
        }
      },
      msg);

  enforce_safety(state);
  return {Ack{sequence_of(msg), accepted}};
}

void failsafe_on_link_loss(RoverState& state) {
  zero_actuators(state);
  if (state.autonomy.active()) stop_autonomy(state, AutonomyTag::Fault, "link lost");
  state.link_up = false;
  enforce_safety(state);
}

void on_link_restored(RoverState& state) { state.link_up = true; }

TelemetrySnapshot build_snapshot(const RoverState& state, const SensorReadings& sensors,
                                 std::int64_t t_ms) {
  TelemetrySnapshot s;
  s.t_ms = t_ms;
  s.co2_ppm = sensors.co2_ppm;
  s.co_ppm = sensors.co_ppm;
  s.air_temp_c = sensors.air_temp_c;
  if (sensors.humidity_pct) s.humidity_pct = std::clamp(*sensors.humidity_pct, 0.0, 100.0);
  s.soil_temp_c = sensors.soil_temp_c;
  if (sensors.soil_moisture) s.soil_moisture = std::clamp(*sensors.soil_moisture, 0.0, 1.0);
  s.orientation = state.orientation;
  s.fix = sensors.fix;
  s.autonomy = state.autonomy.tag;
  s.waypoint_index = static_cast<int>(state.autonomy.current_index);
  s.fault_reason = state.autonomy.fault_reason;
  for (const auto& section : state.power) s.power.push_back(to_reading(section));
  s.estopped = state.drive.estopped;
  s.arm_payload_kg = state.arm.payload_kg;
  s.arm_overload = state.arm.overload;
  s.camera_online = sensors.camera_online;
  return s;
}

std::vector<double> estimate_loads(const RoverState& state) {
  // Wheel motors draw up to ~11 A each at full load; the arm idles near 1 A
  // and reaches ~5.5 A lifting its 5 kg rating.
  constexpr double kWheelFullLoadA = 11.0;
  constexpr double kArmIdleA = 0.95;
  constexpr double kArmPerKgA = (5.5 - kArmIdleA) / 5.0;
  constexpr double kComputeA = 3.0;
  constexpr double kCommsA = 1.5;

  double wheels = 0.0;
  for (double t : state.drive.wheel_throttle) wheels += std::abs(t) * kWheelFullLoadA;
  const bool arm_moving = std::any_of(state.arm.joint_rate.begin(), state.arm.joint_rate.end(),
                                      [](double r) { return r != 0.0; });
  const double arm = arm_moving ? kArmIdleA + kArmPerKgA * state.arm.payload_kg : 0.0;

  std::vector<double> loads;
  for (const auto& section : state.power) {
    switch (section.id) {
      case PowerSectionId::Drive: loads.push_back(wheels + arm); break;
      case PowerSectionId::Compute: loads.push_back(kComputeA); break;
      case PowerSectionId::Comms: loads.push_back(kCommsA); break;
    }
  }
  return loads;
}

DriveState control_tick(RoverState& state, const TickInputs& in, const ControllerConfig& config) {
  const auto dt = static_cast<double>(config.tick_ms);
  if (in.imu) {
    state.orientation = compute_orientation(in.imu->accel_g, in.imu->gyro_dps,
                                            state.orientation.value_or(Orientation{}), dt,
                                            in.compass, config.imu_time_constant_ms);
  }

  if (state.autonomy.active()) {
    geo::HeadingDeg heading;
    if (in.compass) {
      heading = *in.compass;
    } else if (state.orientation) {
      heading = geo::HeadingDeg(state.orientation->yaw_deg);
    }
    const nmea::GpsFix fix = in.fix.value_or(nmea::GpsFix{});
    const bool estopped = state.drive.estopped;
    state.drive = limit(run_autonomy_step(state.autonomy, fix, heading, in.beacon, config.autonomy,
                                          config.max_steer_deg),
                        config.max_steer_deg);
    state.drive.estopped = estopped;
    if (!state.autonomy.active()) zero_actuators(state);
  }

  state.drive = DriveState{limit(state.drive, config.max_steer_deg)};
  enforce_safety(state);
  state.arm.overload = state.arm.payload_kg > config.arm_payload_limit_kg;

  state.power = power_step(std::move(state.power), estimate_loads(state), config.tick_ms);
  return state.drive;
}

}  // namespace rover::onboard
