#include "rover/basestation/map.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rover::base {

namespace {

// Minimum span so a view built from a single point still projects.
constexpr double kMinSpanDeg = 1e-6;

double span(double hi, double lo) { return std::max(hi - lo, kMinSpanDeg); }

void check(const Canvas& c) {
  if (c.width <= 0 || c.height <= 0) throw std::invalid_argument("canvas dimensions must be positive");
}

}  // namespace

bool Bounds::contains(const geo::GeoPoint& p) const {
  return p.lat() <= north && p.lat() >= south && p.lon() >= west && p.lon() <= east;
}

void Bounds::expand(const geo::GeoPoint& p) {
  north = std::max(north, p.lat());
  south = std::min(south, p.lat());
  east = std::max(east, p.lon());
  west = std::min(west, p.lon());
}

geo::GeoPoint Bounds::center() const { return geo::GeoPoint((north + south) / 2.0, (east + west) / 2.0); }

Bounds parse_bounds(const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  std::vector<double> v;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bounds: not a number '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos)
      throw std::invalid_argument("bounds: not a number '" + item + "'");
    v.push_back(x);
  }
  if (v.size() != 4) throw std::invalid_argument("bounds must be lat1,lon1,lat2,lon2");
  const geo::GeoPoint a(v[0], v[1]), b(v[2], v[3]);
  Bounds out{std::max(a.lat(), b.lat()), std::min(a.lat(), b.lat()), std::min(a.lon(), b.lon()),
             std::max(a.lon(), b.lon())};
  if (out.north == out.south || out.east == out.west) throw std::invalid_argument("bounds have zero area");
  return out;
}

MapView::MapView(Bounds bounds) : bounds_(bounds), initialized_(true) {}

void MapView::include(const geo::GeoPoint& p) {
  if (!initialized_) {
    bounds_ = {p.lat(), p.lat(), p.lon(), p.lon()};
    initialized_ = true;
  } else {
    bounds_.expand(p);
  }
}

void MapView::add_trail_point(const geo::GeoPoint& p) {
  include(p);
  trail_.push_back(p);
}

void MapView::set_waypoints(std::vector<geo::GeoPoint> waypoints) {
  for (const auto& p : waypoints) include(p);
  waypoints_ = std::move(waypoints);
}

Pixel project(const geo::GeoPoint& p, const Bounds& b, const Canvas& c) {
  check(c);
  return {(p.lon() - b.west) / span(b.east, b.west) * c.width,
          (b.north - p.lat()) / span(b.north, b.south) * c.height};
}

Pixel project_to_map(const geo::GeoPoint& p, MapView& view, const Canvas& c) {
  check(c);
  view.include(p);
  return project(p, view.bounds(), c);
}

geo::GeoPoint unproject(const Pixel& px, const Bounds& b, const Canvas& c) {
  check(c);
  return geo::GeoPoint(b.north - px.y / c.height * span(b.north, b.south),
                       b.west + px.x / c.width * span(b.east, b.west));
}

}  // namespace rover::base
