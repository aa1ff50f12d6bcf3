#pragma once

#include <string>
#include <vector>

#include "rover/geodesy.hpp"

namespace rover::base {

/// Latitude/longitude rectangle. Does not cross the antimeridian.
struct Bounds {
  double north = 0.0;
  double south = 0.0;
  double west = 0.0;
  double east = 0.0;

  bool contains(const geo::GeoPoint& p) const;
  /// Grows the rectangle just enough to contain p.
  void expand(const geo::GeoPoint& p);
  geo::GeoPoint center() const;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Parses "lat1,lon1,lat2,lon2" (any two opposite corners).
/// Throws std::invalid_argument on malformed input.
Bounds parse_bounds(const std::string& text);

struct Canvas {
  int width = 800;
  int height = 600;
};

struct Pixel {
  double x = 0.0;
  double y = 0.0;
};

/// Offline map state: the map rectangle, the rover trail and the mission
/// waypoints. Points added outside the bounds expand them.
class MapView {
 public:
  MapView() = default;
  explicit MapView(Bounds bounds);

  void add_trail_point(const geo::GeoPoint& p);
  void set_waypoints(std::vector<geo::GeoPoint> waypoints);
  /// Expands the bounds to include p.
  void include(const geo::GeoPoint& p);

  const Bounds& bounds() const { return bounds_; }
  const std::vector<geo::GeoPoint>& trail() const { return trail_; }
  const std::vector<geo::GeoPoint>& waypoints() const { return waypoints_; }
  bool empty() const { return !initialized_; }

 private:
  Bounds bounds_;
  bool initialized_ = false;
  std::vector<geo::GeoPoint> trail_;
  std::vector<geo::GeoPoint> waypoints_;
};

/// Equirectangular projection of the view's bounds onto the canvas: the
/// north-west corner is pixel (0, 0), south-east is (width, height). A
/// point outside the bounds first expands them. Throws
/// std::invalid_argument for a non-positive canvas.
Pixel project_to_map(const geo::GeoPoint& point, MapView& view, const Canvas& canvas);

/// Projection with fixed bounds (no expansion).
Pixel project(const geo::GeoPoint& point, const Bounds& bounds, const Canvas& canvas);

/// Inverse of project.
geo::GeoPoint unproject(const Pixel& pixel, const Bounds& bounds, const Canvas& canvas);

}  // namespace rover::base
