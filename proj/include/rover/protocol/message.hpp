#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "rover/geodesy.hpp"
#include "rover/protocol/telemetry.hpp"

namespace rover::proto {

// Control messages carry a per-session sequence number assigned by the
// sending session. A seq of 0 means "not yet assigned".

struct Drive {
  std::uint64_t seq = 0;
  double throttle = 0.0;   // [-1, 1]
  double steer_deg = 0.0;  // requested; the rover clamps to its mechanical limit
  friend bool operator==(const Drive&, const Drive&) = default;
};

enum class ArmJointId { Base, Shoulder, Elbow, Wrist, GripRotate, GripClose };
inline constexpr int kArmJointCount = 6;

struct ArmJoint {
  std::uint64_t seq = 0;
  ArmJointId joint = ArmJointId::Base;
  double rate = 0.0;  // [-1, 1]
  friend bool operator==(const ArmJoint&, const ArmJoint&) = default;
};

struct EStop {
  std::uint64_t seq = 0;
  friend bool operator==(const EStop&, const EStop&) = default;
};

struct ClearEStop {
  std::uint64_t seq = 0;
  friend bool operator==(const ClearEStop&, const ClearEStop&) = default;
};

struct SetWaypoints {
  std::uint64_t seq = 0;
  std::vector<geo::GeoPoint> points;
  friend bool operator==(const SetWaypoints&, const SetWaypoints&) = default;
};

struct StartAutonomy {
  std::uint64_t seq = 0;
  friend bool operator==(const StartAutonomy&, const StartAutonomy&) = default;
};

struct AbortAutonomy {
  std::uint64_t seq = 0;
  friend bool operator==(const AbortAutonomy&, const AbortAutonomy&) = default;
};

enum class ScienceAction { Drill, ReadSensors, RunBiomass, RunCapillary };

struct ScienceCommand {
  std::uint64_t seq = 0;
  ScienceAction action = ScienceAction::ReadSensors;
  friend bool operator==(const ScienceCommand&, const ScienceCommand&) = default;
};

/// Response to a control message; `seq` is the sequence number being acknowledged.
struct Ack {
  std::uint64_t seq = 0;
  bool accepted = false;
  friend bool operator==(const Ack&, const Ack&) = default;
};

struct Telemetry {
  TelemetrySnapshot snapshot;
  friend bool operator==(const Telemetry&, const Telemetry&) = default;
};

/// Liveness beacon; `seq` counts heartbeats independently of control traffic.
struct Heartbeat {
  std::uint64_t seq = 0;
  friend bool operator==(const Heartbeat&, const Heartbeat&) = default;
};

using Message = std::variant<Drive, ArmJoint, EStop, ClearEStop, SetWaypoints, StartAutonomy,
                             AbortAutonomy, ScienceCommand, Ack, Telemetry, Heartbeat>;

/// True for operator commands that are sequenced and acknowledged.
bool is_control(const Message& msg);

/// Sequence number of a control message, 0 for everything else.
std::uint64_t sequence_of(const Message& msg);

/// Stamps a control message with `seq`; no effect on other kinds.
void set_sequence(Message& msg, std::uint64_t seq);

/// The wire `"type"` discriminator, e.g. "drive", "eStop".
const char* type_name(const Message& msg);

const char* to_string(ArmJointId joint);
const char* to_string(ScienceAction action);

}  // namespace rover::proto
