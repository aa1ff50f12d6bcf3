#include "rover/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rover::geo {

namespace {

// Central angles this close to 0 or pi leave the azimuth undefined.
constexpr double kDegenerateAngleRad = 1e-12;

double wrap_lon(double lon) {
  double wrapped = std::fmod(lon, 360.0);
  if (wrapped <= -180.0) wrapped += 360.0;
  if (wrapped > 180.0) wrapped -= 360.0;
  return wrapped;
}

double central_angle(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = deg_to_rad(a.lat());
  const double phi2 = deg_to_rad(b.lat());
  const double dphi = phi2 - phi1;
  const double dlambda = deg_to_rad(b.lon() - a.lon());
  const double s_phi = std::sin(dphi / 2.0);
  const double s_lambda = std::sin(dlambda / 2.0);
  double h = s_phi * s_phi + std::cos(phi1) * std::cos(phi2) * s_lambda * s_lambda;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

}  // namespace

GeoPoint::GeoPoint(double lat_deg, double lon_deg) {
  if (!std::isfinite(lat_deg) || !std::isfinite(lon_deg))
    throw std::invalid_argument("coordinates must be finite");
  if (lat_deg < -90.0 || lat_deg > 90.0)
    throw std::invalid_argument("latitude outside [-90, 90]");
  lat_ = lat_deg;
  lon_ = wrap_lon(lon_deg);
}

HeadingDeg::HeadingDeg(double deg) {
  if (!std::isfinite(deg)) throw std::invalid_argument("heading must be finite");
  value_ = wrap_360(deg);
}

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

double wrap_360(double deg) {
  double wrapped = std::fmod(deg, 360.0);
  if (wrapped < 0.0) wrapped += 360.0;
  // fmod of a tiny negative value plus 360 can round up to exactly 360.
  if (wrapped >= 360.0) wrapped = 0.0;
  return wrapped;
}

double haversine_distance(const GeoPoint& a, const GeoPoint& b, const EarthModel& earth) {
  return earth.radius_m * central_angle(a, b);
}

HeadingDeg initial_bearing(const GeoPoint& a, const GeoPoint& b) {
  const double sigma = central_angle(a, b);
  if (sigma < kDegenerateAngleRad || std::numbers::pi - sigma < kDegenerateAngleRad)
    throw DegenerateBearing();
  const double phi1 = deg_to_rad(a.lat());
  const double phi2 = deg_to_rad(b.lat());
  const double dlambda = deg_to_rad(b.lon() - a.lon());
  const double y = std::sin(dlambda) * std::cos(phi2);
  const double x = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dlambda);
  return HeadingDeg(rad_to_deg(std::atan2(y, x)));
}

GeoPoint destination_point(const GeoPoint& origin, HeadingDeg bearing, double distance_m,
                           const EarthModel& earth) {
  if (!(distance_m >= 0.0)) throw std::invalid_argument("distance must be non-negative");
  if (distance_m == 0.0) return origin;
  const double delta = distance_m / earth.radius_m;
  const double theta = deg_to_rad(bearing.value());
  const double phi1 = deg_to_rad(origin.lat());
  const double lambda1 = deg_to_rad(origin.lon());
  const double sin_phi2 =
      std::sin(phi1) * std::cos(delta) + std::cos(phi1) * std::sin(delta) * std::cos(theta);
  const double phi2 = std::asin(std::clamp(sin_phi2, -1.0, 1.0));
  const double lambda2 =
      lambda1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(phi1),
                           std::cos(delta) - std::sin(phi1) * sin_phi2);
  return {std::clamp(rad_to_deg(phi2), -90.0, 90.0), rad_to_deg(lambda2)};
}

double angular_difference(HeadingDeg current, HeadingDeg target) {
  double diff = target.value() - current.value();
  if (diff > 180.0) diff -= 360.0;
  if (diff <= -180.0) diff += 360.0;
  return diff;
}

}  // namespace rover::geo
