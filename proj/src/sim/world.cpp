#include "rover/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace rover::sim {

namespace {

std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

double side_mean(const onboard::DriveState& d, const int (&wheels)[3]) {
  double sum = 0.0;
  for (int i : wheels) sum += d.wheel_throttle[i];
  return sum / 3.0;
}

}  // namespace

const char* to_string(TerrainKind kind) {
  switch (kind) {
    case TerrainKind::VerticalDrop: return "verticalDrop";
    case TerrainKind::Slope: return "slope";
    case TerrainKind::Obstacle: return "obstacle";
  }
  return "?";
}

void TerrainFeature::validate() const {
  if (!(angle_deg > 0.0 && angle_deg <= 90.0))
    throw std::invalid_argument("terrain angle must be in (0, 90]");
  if (!(height_m > 0.0) || !std::isfinite(height_m))
    throw std::invalid_argument("terrain height must be positive");
  if (!(extent_m > 0.0) || !std::isfinite(extent_m))
    throw std::invalid_argument("terrain extent must be positive");
}

double drop_height_limit(double angle_deg) {
  constexpr double a0 = 60.0, h0 = 0.45, a1 = 90.0, h1 = 0.7;
  if (angle_deg <= a0) return h0;
  if (angle_deg >= a1) return h1;
  return std::lerp(h0, h1, (angle_deg - a0) / (a1 - a0));
}

bool traversable(const TerrainFeature& f) {
  switch (f.kind) {
    case TerrainKind::VerticalDrop: return f.height_m <= drop_height_limit(f.angle_deg);
    case TerrainKind::Slope: return f.angle_deg <= kSlopeAngleLimitDeg && f.height_m <= kSlopeHeightLimitM;
    case TerrainKind::Obstacle: return f.height_m <= kObstacleHeightLimitM;
  }
  return false;
}

void NoiseModel::validate() const {
  if (!(gps_error_radius_m >= 0.0) || !(compass_sigma_deg >= 0.0))
    throw std::invalid_argument("noise parameters must be non-negative");
}

void VehicleParams::validate() const {
  if (!(wheelbase_m > 0.0) || !(track_width_m > 0.0) || !(max_speed_mps > 0.0) ||
      !(detection_range_m >= 0.0) || !(camera_fov_deg > 0.0 && camera_fov_deg <= 360.0))
    throw std::invalid_argument("invalid vehicle parameters");
}

SimWorld::SimWorld(std::uint64_t seed_, RoverPose start, geo::GeoPoint base)
    : seed(seed_),
      rover(start),
      base_pos(base),
      gps_rng(make_stream(seed_, 1)),
      compass_rng(make_stream(seed_, 2)),
      env_rng(make_stream(seed_, 3)),
      link_rng(make_stream(seed_, 4)) {}

void step(SimWorld& w, const onboard::DriveState& drive, std::int64_t dt_ms) {
  if (dt_ms <= 0) throw std::invalid_argument("dt must be positive");
  const double dt_s = static_cast<double>(dt_ms) / 1000.0;
  const auto& veh = w.vehicle;

  const auto& th = drive.wheel_throttle;
  const double mean = std::accumulate(th.begin(), th.end(), 0.0) / static_cast<double>(th.size());
  const double v = veh.max_speed_mps * mean;
  const double skid = (side_mean(drive, onboard::kLeftWheels) - side_mean(drive, onboard::kRightWheels)) *
                      veh.max_speed_mps / veh.track_width_m;
  const double yaw_rate =
      v * std::tan(geo::deg_to_rad(drive.steer_deg)) / veh.wheelbase_m + skid;  // rad/s

  const double dpsi = geo::rad_to_deg(yaw_rate * dt_s);
  const double dist = std::abs(v) * dt_s;
  w.t_ms += dt_ms;
  w.rover.yaw_rate_dps = geo::rad_to_deg(yaw_rate);

  if (dist == 0.0) {
    w.rover.heading = geo::HeadingDeg(w.rover.heading.value() + dpsi);
    w.rover.speed_mps = 0.0;
    w.blocked = false;
    return;
  }

  // Travel along the mid-step heading; reversing travels the opposite way.
  const double mid = w.rover.heading.value() + dpsi / 2.0 + (v < 0.0 ? 180.0 : 0.0);
  const geo::GeoPoint next = geo::destination_point(w.rover.pos, geo::HeadingDeg(mid), dist);

  const bool refused = std::any_of(w.terrain.begin(), w.terrain.end(), [&](const TerrainFeature& f) {
    if (traversable(f)) return false;
    const double now = geo::haversine_distance(w.rover.pos, f.location);
    const double then = geo::haversine_distance(next, f.location);
    return then <= f.extent_m && then < now;
  });

  w.rover.heading = geo::HeadingDeg(w.rover.heading.value() + dpsi);
  w.blocked = refused;
  if (refused) {
    w.rover.speed_mps = 0.0;
    return;
  }
  w.rover.pos = next;
  w.rover.speed_mps = v;
}

nmea::GpsFix sample_gps_fix(SimWorld& w) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = w.noise.gps_error_radius_m * std::sqrt(unit(w.gps_rng));
  const double theta = 360.0 * unit(w.gps_rng);
  const geo::GeoPoint p = r > 0.0 ? geo::destination_point(w.rover.pos, geo::HeadingDeg(theta), r)
                                  : w.rover.pos;
  nmea::GpsFix fix;
  fix.point = p;
  fix.quality = nmea::FixQuality::Fix;
  fix.satellites = 9;
  fix.hdop = 0.9;
  fix.utc_time = static_cast<double>(w.t_ms % 86'400'000) / 1000.0;
  return fix;
}

std::string sample_gps(SimWorld& w) { return nmea::encode_fix(sample_gps_fix(w)).to_string(); }

geo::HeadingDeg sample_compass(SimWorld& w) {
  double noise = 0.0;
  if (w.noise.compass_sigma_deg > 0.0) {
    std::normal_distribution<double> n(0.0, w.noise.compass_sigma_deg);
    noise = n(w.compass_rng);
  }
  return geo::HeadingDeg(w.rover.heading.value() + noise);
}

std::optional<onboard::BeaconObservation> observe_beacon(const SimWorld& w, std::size_t waypoint_index) {
  const auto it = std::find_if(w.beacons.begin(), w.beacons.end(),
                               [&](const Beacon& b) { return b.waypoint_index == waypoint_index; });
  if (it == w.beacons.end()) return std::nullopt;
  const double range = geo::haversine_distance(w.rover.pos, it->pos);
  if (range > w.vehicle.detection_range_m) return std::nullopt;
  double bearing = 0.0;
  try {
    bearing = geo::angular_difference(w.rover.heading, geo::initial_bearing(w.rover.pos, it->pos));
  } catch (const geo::DegenerateBearing&) {
    return onboard::BeaconObservation{0.0, range};
  }
  if (std::abs(bearing) > w.vehicle.camera_fov_deg / 2.0) return std::nullopt;
  return onboard::BeaconObservation{bearing, range};
}

double distance_to_base(const SimWorld& w) { return geo::haversine_distance(w.rover.pos, w.base_pos); }

}  // namespace rover::sim
