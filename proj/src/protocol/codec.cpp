#include "rover/protocol/codec.hpp"

#include <cmath>

namespace rover::proto {

using nlohmann::json;

namespace {

[[noreturn]] void corrupt(const std::string& why) {
  throw ProtocolError(ProtocolErrc::CorruptPayload, why);
}

template <typename Enum, std::size_t N>
Enum enum_from(const json& j, const char* key, const Enum (&values)[N]) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_string()) corrupt(std::string("missing enum field ") + key);
  const auto& text = it->template get_ref<const std::string&>();
  for (Enum v : values)
    if (text == to_string(v)) return v;
  corrupt("unknown value '" + text + "' for " + key);
}

constexpr ArmJointId kJoints[] = {ArmJointId::Base,  ArmJointId::Shoulder,   ArmJointId::Elbow,
                                  ArmJointId::Wrist, ArmJointId::GripRotate, ArmJointId::GripClose};
constexpr ScienceAction kActions[] = {ScienceAction::Drill, ScienceAction::ReadSensors,
                                      ScienceAction::RunBiomass, ScienceAction::RunCapillary};
constexpr AutonomyTag kTags[] = {AutonomyTag::Idle,           AutonomyTag::AlignHeading,
                                 AutonomyTag::TraverseGps,    AutonomyTag::VisionApproach,
                                 AutonomyTag::Arrived,        AutonomyTag::Fault};
constexpr PowerSectionId kSections[] = {PowerSectionId::Drive, PowerSectionId::Compute,
                                        PowerSectionId::Comms};

const char* quality_name(nmea::FixQuality q) {
  switch (q) {
    case nmea::FixQuality::NoFix: return "noFix";
    case nmea::FixQuality::Fix: return "fix";
    case nmea::FixQuality::DGps: return "dGps";
  }
  return "?";
}

nmea::FixQuality quality_from(const json& j) {
  const auto it = j.find("quality");
  if (it == j.end() || !it->is_string()) corrupt("fix quality missing");
  for (auto q : {nmea::FixQuality::NoFix, nmea::FixQuality::Fix, nmea::FixQuality::DGps})
    if (*it == quality_name(q)) return q;
  corrupt("unknown fix quality");
}

double number(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) corrupt(std::string("missing number ") + key);
  const double v = it->get<double>();
  if (!std::isfinite(v)) corrupt(std::string("non-finite ") + key);
  return v;
}

std::optional<double> optional_number(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return number(j, key);
}

std::int64_t integer(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer()) corrupt(std::string("missing integer ") + key);
  return it->get<std::int64_t>();
}

std::uint64_t sequence(const json& j) {
  const auto it = j.find("seq");
  if (it == j.end() || !it->is_number_unsigned()) {
    if (it != j.end() && it->is_number_integer() && it->get<std::int64_t>() >= 0)
      return it->get<std::uint64_t>();
    corrupt("missing seq");
  }
  return it->get<std::uint64_t>();
}

bool boolean(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_boolean()) corrupt(std::string("missing boolean ") + key);
  return it->get<bool>();
}

void put_optional(json& j, const char* key, const std::optional<double>& v) {
  if (v) j[key] = *v;
}

json point_to_json(const geo::GeoPoint& p) { return {{"lat", p.lat()}, {"lon", p.lon()}}; }

geo::GeoPoint point_from_json(const json& j) {
  if (!j.is_object()) corrupt("point must be an object");
  try {
    return {number(j, "lat"), number(j, "lon")};
  } catch (const std::invalid_argument& e) {
    corrupt(e.what());
  }
}

json fix_to_json(const nmea::GpsFix& fix) {
  json j{{"quality", quality_name(fix.quality)},
         {"utcTime", fix.utc_time},
         {"satellites", fix.satellites}};
  if (fix.point) {
    j["lat"] = fix.point->lat();
    j["lon"] = fix.point->lon();
  }
  put_optional(j, "hdop", fix.hdop);
  put_optional(j, "altitudeM", fix.altitude_m);
  return j;
}

nmea::GpsFix fix_from_json(const json& j) {
  if (!j.is_object()) corrupt("fix must be an object");
  nmea::GpsFix fix;
  fix.quality = quality_from(j);
  fix.utc_time = number(j, "utcTime");
  fix.satellites = static_cast<int>(integer(j, "satellites"));
  if (fix.satellites < 0) corrupt("negative satellite count");
  if (j.contains("lat") || j.contains("lon")) fix.point = point_from_json(j);
  if (fix.quality != nmea::FixQuality::NoFix && !fix.point) corrupt("fix without position");
  fix.hdop = optional_number(j, "hdop");
  fix.altitude_m = optional_number(j, "altitudeM");
  return fix;
}

void check_unit_range(double v, const char* what) {
  if (!std::isfinite(v) || v < -1.0 || v > 1.0)
    throw ProtocolError(ProtocolErrc::InvalidMessage, std::string(what) + " outside [-1, 1]");
}

void check_snapshot(const TelemetrySnapshot& s) {
  auto bad = [](const std::optional<double>& v, double lo, double hi) {
    return v && !(std::isfinite(*v) && *v >= lo && *v <= hi);
  };
  const double inf = INFINITY;
  if (bad(s.humidity_pct, 0.0, 100.0) || bad(s.soil_moisture, 0.0, 1.0) ||
      bad(s.co2_ppm, -inf, inf) || bad(s.co_ppm, -inf, inf) || bad(s.air_temp_c, -inf, inf) ||
      bad(s.soil_temp_c, -inf, inf))
    throw ProtocolError(ProtocolErrc::InvalidMessage, "snapshot sensor field out of range");
}

void validate(const Message& msg) {
  if (const auto* d = std::get_if<Drive>(&msg)) {
    check_unit_range(d->throttle, "throttle");
    if (!std::isfinite(d->steer_deg))
      throw ProtocolError(ProtocolErrc::InvalidMessage, "steer must be finite");
  } else if (const auto* a = std::get_if<ArmJoint>(&msg)) {
    check_unit_range(a->rate, "arm rate");
  } else if (const auto* t = std::get_if<Telemetry>(&msg)) {
    check_snapshot(t->snapshot);
  }
}

}  // namespace

json snapshot_to_json(const TelemetrySnapshot& s) {
  json j{{"tMs", s.t_ms},
         {"autonomy", {{"state", to_string(s.autonomy)}, {"waypointIndex", s.waypoint_index}}},
         {"estopped", s.estopped},
         {"armPayloadKg", s.arm_payload_kg},
         {"armOverload", s.arm_overload},
         {"cameraOnline", s.camera_online}};
  put_optional(j, "co2Ppm", s.co2_ppm);
  put_optional(j, "coPpm", s.co_ppm);
  put_optional(j, "airTempC", s.air_temp_c);
  put_optional(j, "humidityPct", s.humidity_pct);
  put_optional(j, "soilTempC", s.soil_temp_c);
  put_optional(j, "soilMoisture", s.soil_moisture);
  if (s.orientation) {
    j["orientation"] = {{"rollDeg", s.orientation->roll_deg},
                        {"pitchDeg", s.orientation->pitch_deg},
                        {"yawDeg", s.orientation->yaw_deg}};
  }
  if (s.fix) j["fix"] = fix_to_json(*s.fix);
  if (s.fault_reason) j["autonomy"]["faultReason"] = *s.fault_reason;
  json power = json::array();
  for (const auto& p : s.power) {
    power.push_back({{"section", to_string(p.section)},
                     {"busV", p.bus_v},
                     {"chargeFraction", p.charge_fraction},
                     {"tapsV", p.taps_v}});
  }
  j["power"] = std::move(power);
  return j;
}

TelemetrySnapshot snapshot_from_json(const json& j) {
  if (!j.is_object()) corrupt("snapshot must be an object");
  TelemetrySnapshot s;
  s.t_ms = integer(j, "tMs");
  s.co2_ppm = optional_number(j, "co2Ppm");
  s.co_ppm = optional_number(j, "coPpm");
  s.air_temp_c = optional_number(j, "airTempC");
  s.humidity_pct = optional_number(j, "humidityPct");
  s.soil_temp_c = optional_number(j, "soilTempC");
  s.soil_moisture = optional_number(j, "soilMoisture");
  if (const auto it = j.find("orientation"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) corrupt("orientation must be an object");
    s.orientation = Orientation{number(*it, "rollDeg"), number(*it, "pitchDeg"), number(*it, "yawDeg")};
  }
  if (const auto it = j.find("fix"); it != j.end() && !it->is_null()) s.fix = fix_from_json(*it);

  const auto autonomy = j.find("autonomy");
  if (autonomy == j.end() || !autonomy->is_object()) corrupt("autonomy missing");
  s.autonomy = enum_from(*autonomy, "state", kTags);
  s.waypoint_index = static_cast<int>(integer(*autonomy, "waypointIndex"));
  if (const auto it = autonomy->find("faultReason"); it != autonomy->end()) {
    if (!it->is_string()) corrupt("faultReason must be a string");
    s.fault_reason = it->get<std::string>();
  }

  const auto power = j.find("power");
  if (power == j.end() || !power->is_array()) corrupt("power missing");
  for (const auto& p : *power) {
    if (!p.is_object()) corrupt("power entry must be an object");
    PowerReading r;
    r.section = enum_from(p, "section", kSections);
    r.bus_v = number(p, "busV");
    r.charge_fraction = number(p, "chargeFraction");
    const auto taps = p.find("tapsV");
    if (taps == p.end() || !taps->is_array()) corrupt("tapsV missing");
    for (const auto& t : *taps) {
      if (!t.is_number()) corrupt("tap voltage must be a number");
      r.taps_v.push_back(t.get<double>());
    }
    s.power.push_back(std::move(r));
  }
  s.estopped = boolean(j, "estopped");
  s.arm_payload_kg = number(j, "armPayloadKg");
  s.arm_overload = boolean(j, "armOverload");
  s.camera_online = boolean(j, "cameraOnline");
  try {
    check_snapshot(s);
  } catch (const ProtocolError& e) {
    corrupt(e.what());
  }
  return s;
}

json to_json(const Message& msg) {
  json j = std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Drive>) {
          return {{"seq", m.seq}, {"throttle", m.throttle}, {"steerDeg", m.steer_deg}};
        } else if constexpr (std::is_same_v<T, ArmJoint>) {
          return {{"seq", m.seq}, {"joint", to_string(m.joint)}, {"rate", m.rate}};
        } else if constexpr (std::is_same_v<T, SetWaypoints>) {
          json points = json::array();
          for (const auto& p : m.points) points.push_back(point_to_json(p));
          return {{"seq", m.seq}, {"points", std::move(points)}};
        } else if constexpr (std::is_same_v<T, ScienceCommand>) {
          return {{"seq", m.seq}, {"action", to_string(m.action)}};
        } else if constexpr (std::is_same_v<T, Ack>) {
          return {{"seq", m.seq}, {"accepted", m.accepted}};
        } else if constexpr (std::is_same_v<T, Telemetry>) {
          return {{"snapshot", snapshot_to_json(m.snapshot)}};
        } else {
          // EStop, ClearEStop, StartAutonomy, AbortAutonomy, Heartbeat
          return {{"seq", m.seq}};
        }
      },
      msg);
  j["type"] = type_name(msg);
  return j;
}

Message message_from_json(const json& j) {
  if (!j.is_object()) corrupt("payload must be a JSON object");
  const auto type_it = j.find("type");
  if (type_it == j.end() || !type_it->is_string()) corrupt("missing type discriminator");
  const auto& type = type_it->get_ref<const std::string&>();

  Message msg;
  if (type == "drive") {
    msg = Drive{sequence(j), number(j, "throttle"), number(j, "steerDeg")};
  } else if (type == "armJoint") {
    msg = ArmJoint{sequence(j), enum_from(j, "joint", kJoints), number(j, "rate")};
  } else if (type == "eStop") {
    msg = EStop{sequence(j)};
  } else if (type == "clearEStop") {
    msg = ClearEStop{sequence(j)};
  } else if (type == "setWaypoints") {
    SetWaypoints w{sequence(j), {}};
    const auto points = j.find("points");
    if (points == j.end() || !points->is_array()) corrupt("points missing");
    for (const auto& p : *points) w.points.push_back(point_from_json(p));
    msg = std::move(w);
  } else if (type == "startAutonomy") {
    msg = StartAutonomy{sequence(j)};
  } else if (type == "abortAutonomy") {
    msg = AbortAutonomy{sequence(j)};
  } else if (type == "scienceCommand") {
    msg = ScienceCommand{sequence(j), enum_from(j, "action", kActions)};
  } else if (type == "ack") {
    msg = Ack{sequence(j), boolean(j, "accepted")};
  } else if (type == "telemetry") {
    const auto snap = j.find("snapshot");
    if (snap == j.end()) corrupt("snapshot missing");
    msg = Telemetry{snapshot_from_json(*snap)};
  } else if (type == "heartbeat") {
    msg = Heartbeat{sequence(j)};
  } else {
    corrupt("unknown message type '" + type + "'");
  }
  try {
    validate(msg);
  } catch (const ProtocolError& e) {
    corrupt(e.what());
  }
  return msg;
}

Bytes encode(const Message& msg) {
  validate(msg);
  std::string payload;
  try {
    payload = to_json(msg).dump();
  } catch (const json::exception& e) {
    throw ProtocolError(ProtocolErrc::InvalidMessage, e.what());
  }
  if (payload.size() > kMaxPayloadBytes)
    throw ProtocolError(ProtocolErrc::OversizedPayload,
                        "payload of " + std::to_string(payload.size()) + " bytes exceeds frame limit");
  const auto n = static_cast<std::uint32_t>(payload.size());
  Bytes frame;
  frame.reserve(kHeaderBytes + n);
  frame.push_back(static_cast<std::uint8_t>(n >> 24));
  frame.push_back(static_cast<std::uint8_t>(n >> 16));
  frame.push_back(static_cast<std::uint8_t>(n >> 8));
  frame.push_back(static_cast<std::uint8_t>(n));
  frame.insert(frame.end(), payload.begin(), payload.end());
  return frame;
}

DecodeResult decode(std::span<const std::uint8_t> bytes) {
  DecodeResult result;
  if (bytes.size() < kHeaderBytes) return result;
  const std::uint32_t n = (std::uint32_t{bytes[0]} << 24) | (std::uint32_t{bytes[1]} << 16) |
                          (std::uint32_t{bytes[2]} << 8) | std::uint32_t{bytes[3]};
  if (n > kMaxPayloadBytes) {
    result.status = DecodeStatus::OversizedLength;
    result.error = "length prefix " + std::to_string(n) + " exceeds frame limit";
    return result;
  }
  if (bytes.size() < kHeaderBytes + n) return result;

  const auto payload = bytes.subspan(kHeaderBytes, n);
  try {
    const json j = json::parse(payload.begin(), payload.end());
    result.message = message_from_json(j);
    result.status = DecodeStatus::Ok;
    result.consumed = kHeaderBytes + n;
  } catch (const json::exception& e) {
    result.status = DecodeStatus::CorruptPayload;
    result.error = e.what();
  } catch (const ProtocolError& e) {
    result.status = DecodeStatus::CorruptPayload;
    result.error = e.what();
  }
  return result;
}

void FrameDecoder::feed(std::span<const std::uint8_t> bytes) {
  if (offset_ > 0 && offset_ >= buffer_.size() / 2) {
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(offset_));
    offset_ = 0;
  }
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

std::optional<Message> FrameDecoder::next() {
  DecodeResult r = decode(std::span<const std::uint8_t>(buffer_).subspan(offset_));
  switch (r.status) {
    case DecodeStatus::Ok:
      offset_ += r.consumed;
      return std::move(r.message);
    case DecodeStatus::Truncated:
      return std::nullopt;
    case DecodeStatus::OversizedLength:
      throw ProtocolError(ProtocolErrc::OversizedLength, r.error);
    case DecodeStatus::CorruptPayload:
      break;
  }
  throw ProtocolError(ProtocolErrc::CorruptPayload, r.error);
}

}  // namespace rover::proto
