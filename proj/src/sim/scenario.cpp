#include "rover/sim/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rover/protocol/codec.hpp"

namespace rover::sim {

using nlohmann::json;

namespace {

geo::GeoPoint point_from(const json& j) { return geo::GeoPoint(j.at("lat").get<double>(), j.at("lon").get<double>()); }

json point_to(const geo::GeoPoint& p) { return {{"lat", p.lat()}, {"lon", p.lon()}}; }

TerrainKind kind_from(const std::string& s) {
  if (s == "verticalDrop") return TerrainKind::VerticalDrop;
  if (s == "slope") return TerrainKind::Slope;
  if (s == "obstacle") return TerrainKind::Obstacle;
  throw ScenarioError("unknown terrain kind '" + s + "'");
}

Scenario from_json(const json& j) {
  Scenario s;
  s.name = j.value("name", "");
  const auto& start = j.at("start");
  s.start.pos = point_from(start);
  s.start.heading = geo::HeadingDeg(start.value("headingDeg", 0.0));
  s.base = j.contains("base") ? point_from(j.at("base")) : s.start.pos;

  for (const auto& w : j.value("waypoints", json::array())) s.waypoints.push_back(point_from(w));
  if (j.contains("beacons")) {
    for (const auto& b : j.at("beacons"))
      s.beacons.push_back({point_from(b), b.at("waypointIndex").get<std::size_t>()});
  } else {
    for (std::size_t i = 0; i < s.waypoints.size(); ++i) s.beacons.push_back({s.waypoints[i], i});
  }
  for (const auto& t : j.value("terrain", json::array())) {
    s.terrain.push_back({kind_from(t.at("kind").get<std::string>()), point_from(t),
                         t.value("extentM", 1.0), t.value("angleDeg", 90.0),
                         t.at("heightM").get<double>()});
  }
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    s.noise.gps_error_radius_m = n.value("gpsErrorRadiusM", s.noise.gps_error_radius_m);
    s.noise.compass_sigma_deg = n.value("compassSigmaDeg", s.noise.compass_sigma_deg);
  }
  if (j.contains("link")) {
    const auto& l = j.at("link");
    s.link.full_strength_range_m = l.value("fullStrengthRangeM", s.link.full_strength_range_m);
    s.link.dropout_range_m = l.value("dropoutRangeM", s.link.dropout_range_m);
    s.link.degraded_loss_rate = l.value("degradedLossRate", s.link.degraded_loss_rate);
  }
  if (j.contains("vehicle")) {
    const auto& v = j.at("vehicle");
    s.vehicle.wheelbase_m = v.value("wheelbaseM", s.vehicle.wheelbase_m);
    s.vehicle.track_width_m = v.value("trackWidthM", s.vehicle.track_width_m);
    s.vehicle.max_speed_mps = v.value("maxSpeedMps", s.vehicle.max_speed_mps);
    s.vehicle.detection_range_m = v.value("detectionRangeM", s.vehicle.detection_range_m);
    s.vehicle.camera_fov_deg = v.value("cameraFovDeg", s.vehicle.camera_fov_deg);
  }
  s.duration_s = j.value("durationS", s.duration_s);
  s.stop_when_done = j.value("stopWhenDone", s.stop_when_done);
  for (const auto& c : j.value("commands", json::array())) {
    json message = c.at("message");
    if (message.is_object() && !message.contains("seq")) message["seq"] = 0;
    s.commands.push_back({c.at("tMs").get<std::int64_t>(), proto::message_from_json(message)});
  }
  return s;
}

}  // namespace

void Scenario::validate() const {
  try {
    for (const auto& t : terrain) t.validate();
    noise.validate();
    link.validate();
    vehicle.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what());
  }
  if (!(duration_s > 0.0)) throw ScenarioError("durationS must be positive");
  for (const auto& b : beacons)
    if (b.waypoint_index >= waypoints.size()) throw ScenarioError("beacon refers to a missing waypoint");
  for (const auto& c : commands)
    if (c.t_ms < 0 || !proto::is_control(c.message))
      throw ScenarioError("commands must be control messages at non-negative times");
}

Scenario parse_scenario(const std::string& text) {
  Scenario s;
  try {
    s = from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  } catch (const proto::ProtocolError& e) {
    throw ScenarioError(std::string("scenario command: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["start"] = point_to(s.start.pos);
  j["start"]["headingDeg"] = s.start.heading.value();
  j["base"] = point_to(s.base);
  j["waypoints"] = json::array();
  for (const auto& w : s.waypoints) j["waypoints"].push_back(point_to(w));
  j["beacons"] = json::array();
  for (const auto& b : s.beacons) {
    auto o = point_to(b.pos);
    o["waypointIndex"] = b.waypoint_index;
    j["beacons"].push_back(o);
  }
  j["terrain"] = json::array();
  for (const auto& t : s.terrain) {
    auto o = point_to(t.location);
    o["kind"] = to_string(t.kind);
    o["extentM"] = t.extent_m;
    o["angleDeg"] = t.angle_deg;
    o["heightM"] = t.height_m;
    j["terrain"].push_back(o);
  }
  j["noise"] = {{"gpsErrorRadiusM", s.noise.gps_error_radius_m},
                {"compassSigmaDeg", s.noise.compass_sigma_deg}};
  j["link"] = {{"fullStrengthRangeM", s.link.full_strength_range_m},
               {"dropoutRangeM", s.link.dropout_range_m},
               {"degradedLossRate", s.link.degraded_loss_rate}};
  j["vehicle"] = {{"wheelbaseM", s.vehicle.wheelbase_m},
                  {"trackWidthM", s.vehicle.track_width_m},
                  {"maxSpeedMps", s.vehicle.max_speed_mps},
                  {"detectionRangeM", s.vehicle.detection_range_m},
                  {"cameraFovDeg", s.vehicle.camera_fov_deg}};
  j["durationS"] = s.duration_s;
  j["stopWhenDone"] = s.stop_when_done;
  if (!s.commands.empty()) {
    j["commands"] = json::array();
    for (const auto& c : s.commands) j["commands"].push_back({{"tMs", c.t_ms}, {"message", proto::to_json(c.message)}});
  }
  return j.dump(2);
}

std::vector<ScheduledCommand> effective_commands(const Scenario& s) {
  if (!s.commands.empty()) return s.commands;
  if (s.waypoints.empty()) return {};
  return {{0, proto::SetWaypoints{0, s.waypoints}}, {0, proto::StartAutonomy{}}};
}

SimWorld make_world(const Scenario& s, std::uint64_t seed) {
  SimWorld w(seed, s.start, s.base);
  w.terrain = s.terrain;
  w.beacons = s.beacons;
  w.noise = s.noise;
  w.link = s.link;
  w.vehicle = s.vehicle;
  return w;
}

Scenario course_scenario(const geo::GeoPoint& start, double gps_error_radius_m,
                         double compass_sigma_deg) {
  Scenario s;
  s.name = "waypoint course";
  s.start.pos = start;
  s.start.heading = geo::HeadingDeg(0.0);
  s.base = start;
  // Legs as (bearing deg, length m) from the previous gate.
  const std::pair<double, double> legs[] = {{10, 10}, {80, 10}, {150, 10}, {60, 20}, {300, 10}, {230, 10}};
  geo::GeoPoint at = start;
  for (const auto& [bearing, length] : legs) {
    at = geo::destination_point(at, geo::HeadingDeg(bearing), length);
    s.waypoints.push_back(at);
  }
  for (std::size_t i = 0; i < s.waypoints.size(); ++i) s.beacons.push_back({s.waypoints[i], i});
  s.noise.gps_error_radius_m = gps_error_radius_m;
  s.noise.compass_sigma_deg = compass_sigma_deg;
  s.duration_s = 900.0;
  return s;
}

}  // namespace rover::sim
