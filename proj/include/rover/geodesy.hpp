#pragma once

#include <stdexcept>

namespace rover::geo {

/// Latitude/longitude pair in degrees on a spherical earth.
///
/// Latitude must lie in [-90, 90]; longitude is wrapped into (-180, 180].
class GeoPoint {
 public:
  GeoPoint() = default;
  GeoPoint(double lat_deg, double lon_deg);

  double lat() const { return lat_; }
  double lon() const { return lon_; }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

 private:
  double lat_ = 0.0;
  double lon_ = 0.0;
};

/// Compass heading, clockwise from true north, normalized into [0, 360).
class HeadingDeg {
 public:
  HeadingDeg() = default;
  explicit HeadingDeg(double deg);

  double value() const { return value_; }

  friend bool operator==(const HeadingDeg&, const HeadingDeg&) = default;

 private:
  double value_ = 0.0;
};

struct EarthModel {
  static constexpr double kMeanRadiusM = 6'371'000.0;

  EarthModel() = default;
  explicit EarthModel(double radius) : radius_m(radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("earth radius must be positive");
  }

  double radius_m = kMeanRadiusM;
};

/// Thrown by initial_bearing when the two points coincide (or are antipodal),
/// i.e. no unique forward azimuth exists.
class DegenerateBearing : public std::domain_error {
 public:
  DegenerateBearing() : std::domain_error("bearing undefined between coincident or antipodal points") {}
};

double deg_to_rad(double deg);
double rad_to_deg(double rad);

/// Normalizes any finite angle into [0, 360).
double wrap_360(double deg);

/// Great-circle distance in meters (haversine form).
double haversine_distance(const GeoPoint& a, const GeoPoint& b, const EarthModel& earth = {});

/// Forward azimuth at `a` of the great circle toward `b`.
HeadingDeg initial_bearing(const GeoPoint& a, const GeoPoint& b);

/// Point reached after travelling `distance_m` from `origin` along the great
/// circle leaving at `bearing`.
GeoPoint destination_point(const GeoPoint& origin, HeadingDeg bearing, double distance_m,
                           const EarthModel& earth = {});

/// Smallest signed rotation taking `current` onto `target`, in (-180, 180].
/// Positive is clockwise (turn right). An exact half-turn resolves to +180.
double angular_difference(HeadingDeg current, HeadingDeg target);

}  // namespace rover::geo
