#include "rover/protocol/message.hpp"

#include <type_traits>

namespace rover {

const char* to_string(AutonomyTag tag) {
  switch (tag) {
    case AutonomyTag::Idle: return "idle";
    case AutonomyTag::AlignHeading: return "alignHeading";
    case AutonomyTag::TraverseGps: return "traverseGps";
    case AutonomyTag::VisionApproach: return "visionApproach";
    case AutonomyTag::Arrived: return "arrived";
    case AutonomyTag::Fault: return "fault";
  }
  return "?";
}

const char* to_string(PowerSectionId id) {
  switch (id) {
    case PowerSectionId::Drive: return "drive";
    case PowerSectionId::Compute: return "compute";
    case PowerSectionId::Comms: return "comms";
  }
  return "?";
}

}  // namespace rover

namespace rover::proto {

namespace {

template <typename T>
constexpr bool kIsControl =
    std::is_same_v<T, Drive> || std::is_same_v<T, ArmJoint> || std::is_same_v<T, EStop> ||
    std::is_same_v<T, ClearEStop> || std::is_same_v<T, SetWaypoints> ||
    std::is_same_v<T, StartAutonomy> || std::is_same_v<T, AbortAutonomy> ||
    std::is_same_v<T, ScienceCommand>;

}  // namespace

bool is_control(const Message& msg) {
  return std::visit([](const auto& m) { return kIsControl<std::decay_t<decltype(m)>>; }, msg);
}

std::uint64_t sequence_of(const Message& msg) {
  return std::visit(
      [](const auto& m) -> std::uint64_t {
        if constexpr (kIsControl<std::decay_t<decltype(m)>>) {
          return m.seq;
        } else {
          return 0;
        }
      },
      msg);
}

void set_sequence(Message& msg, std::uint64_t seq) {
  std::visit(
      [seq](auto& m) {
        if constexpr (kIsControl<std::decay_t<decltype(m)>>) m.seq = seq;
      },
      msg);
}

const char* type_name(const Message& msg) {
  static constexpr const char* kNames[] = {"drive",         "armJoint",      "eStop",
                                           "clearEStop",    "setWaypoints",  "startAutonomy",
                                           "abortAutonomy", "scienceCommand", "ack",
                                           "telemetry",     "heartbeat"};
  static_assert(std::size(kNames) == std::variant_size_v<Message>);
  return kNames[msg.index()];
}

const char* to_string(ArmJointId joint) {
  switch (joint) {
    case ArmJointId::Base: return "base";
    case ArmJointId::Shoulder: return "shoulder";
    case ArmJointId::Elbow: return "elbow";
    case ArmJointId::Wrist: return "wrist";
    case ArmJointId::GripRotate: return "gripRotate";
    case ArmJointId::GripClose: return "gripClose";
  }
  return "?";
}

const char* to_string(ScienceAction action) {
  switch (action) {
    case ScienceAction::Drill: return "drill";
    case ScienceAction::ReadSensors: return "readSensors";
    case ScienceAction::RunBiomass: return "runBiomass";
    case ScienceAction::RunCapillary: return "runCapillary";
  }
  return "?";
}

}  // namespace rover::proto
