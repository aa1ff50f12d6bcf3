#include "rover/sim/sensors.hpp"

#include <algorithm>

namespace rover::sim {

namespace {

std::optional<nmea::GpsFix> read_gps(const std::string& sentence) {
  try {
    return nmea::to_fix(nmea::parse_sentence(sentence));
  } catch (const nmea::NmeaError&) {
    return std::nullopt;
  }
}

}  // namespace

onboard::TickInputs sense(SimWorld& w, std::size_t waypoint_index) {
  onboard::TickInputs in;
  in.fix = read_gps(sample_gps(w));
  in.compass = sample_compass(w);
  in.beacon = observe_beacon(w, waypoint_index);
  in.imu = onboard::ImuSample{{0.0, 0.0, 1.0}, {0.0, 0.0, w.rover.yaw_rate_dps}};
  return in;
}

onboard::SensorReadings read_environment(SimWorld& w, const std::optional<nmea::GpsFix>& fix) {
  std::normal_distribution<double> n(0.0, 1.0);
  auto& r = w.env_rng;
  onboard::SensorReadings s;
  s.co2_ppm = 415.0 + 5.0 * n(r);
  s.co_ppm = std::max(0.0, 1.0 + 0.2 * n(r));
  s.air_temp_c = 24.0 + 0.5 * n(r);
  s.humidity_pct = 40.0 + 2.0 * n(r);
  s.soil_temp_c = 20.0 + 0.3 * n(r);
  s.soil_moisture = 0.2 + 0.02 * n(r);
  s.fix = fix;
  s.camera_online = true;
  return s;
}

}  // namespace rover::sim
