#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rover/nmea.hpp"
#include "rover/sim/world.hpp"

using namespace rover;
using namespace rover::sim;
using onboard::DriveState;

namespace {

const geo::GeoPoint kStart(-12.5, 130.8);

SimWorld world_at(double heading = 0.0, std::uint64_t seed = 1) {
  return SimWorld(seed, RoverPose{kStart, geo::HeadingDeg(heading)}, kStart);
}

double offset_m(const geo::GeoPoint& a, const geo::GeoPoint& b) {
  return oracle::vincenty_distance(a.lat(), a.lon(), b.lat(), b.lon());
}

TerrainFeature drop(double angle, double height) {
  return {TerrainKind::VerticalDrop, kStart, 1.0, angle, height};
}

}  // namespace

TEST(Step, ZeroThrottleLeavesPoseUnchanged) {
  auto w = world_at(42.0);
  for (int i = 0; i < 100; ++i) step(w, DriveState::uniform(0.0, 20.0), 50);
  EXPECT_EQ(w.rover.pos, kStart);
  EXPECT_DOUBLE_EQ(w.rover.heading.value(), 42.0);
  EXPECT_EQ(w.t_ms, 5000);
}

TEST(Step, StraightTenSecondsAtFullThrottle) {
  for (double heading : {0.0, 37.0, 200.0}) {
    auto w = world_at(heading);
    for (int i = 0; i < 200; ++i) step(w, DriveState::uniform(1.0, 0.0), 50);
    EXPECT_NEAR(offset_m(kStart, w.rover.pos), 10.0, 1e-6) << heading;
  }
}

TEST(Step, ConstantSteerClosesCircle) {
  const double steer = 35.0, v = 0.5, wheelbase = 0.9;
  const double radius = wheelbase / std::tan(oracle::rad(steer));
  const double period_ms = 2.0 * std::numbers::pi * radius / v * 1000.0;
  auto w = world_at(90.0);
  const auto ticks = static_cast<int>(std::llround(period_ms));
  for (int i = 0; i < ticks; ++i) step(w, DriveState::uniform(v, steer), 1);
  const double dh = std::remainder(w.rover.heading.value() - 90.0, 360.0);
  EXPECT_NEAR(dh, 0.0, 1.0);
  EXPECT_LT(offset_m(kStart, w.rover.pos), 0.05);
}

TEST(Step, DifferentialThrottleTurnsInPlace) {
  auto w = world_at(0.0);
  step(w, DriveState::differential(0.4, -0.4, 35.0), 50);
  EXPECT_EQ(w.rover.pos, kStart);
  EXPECT_GT(w.rover.heading.value(), 0.0);
}

TEST(Step, DisplacementBoundedByMaxSpeed) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> thr(-1, 1), steer(-35, 35);
  auto w = world_at(10.0);
  for (int i = 0; i < 2000; ++i) {
    const auto before = w.rover.pos;
    DriveState d;
    for (double& t : d.wheel_throttle) t = thr(rng);
    d.steer_deg = steer(rng);
    step(w, d, 50);
    ASSERT_LE(offset_m(before, w.rover.pos), w.vehicle.max_speed_mps * 0.05 + 1e-9);
  }
}

TEST(Step, ImpassableFeatureStopsRover) {
  auto w = world_at(0.0);
  const auto wall = geo::destination_point(kStart, geo::HeadingDeg(0), 5.0);
  w.terrain.push_back({TerrainKind::VerticalDrop, wall, 1.0, 90.0, 0.8});
  for (int i = 0; i < 400; ++i) step(w, DriveState::uniform(1.0, 0.0), 50);
  EXPECT_TRUE(w.blocked);
  const double d = offset_m(w.rover.pos, wall);
  EXPECT_GT(d, 1.0 - 1e-9);
  EXPECT_LT(d, 1.1);

  // Backing away is allowed.
  step(w, DriveState::uniform(-1.0, 0.0), 50);
  EXPECT_FALSE(w.blocked);
}

TEST(Step, PassableFeatureDoesNotBlock) {
  auto w = world_at(0.0);
  w.terrain.push_back({TerrainKind::VerticalDrop, geo::destination_point(kStart, geo::HeadingDeg(0), 5.0),
                       1.0, 90.0, 0.7});
  for (int i = 0; i < 400; ++i) step(w, DriveState::uniform(1.0, 0.0), 50);
  EXPECT_NEAR(offset_m(kStart, w.rover.pos), 20.0, 1e-6);
}

TEST(Traversable, PaperAnchors) {
  EXPECT_TRUE(traversable(drop(90, 0.7)));
  EXPECT_FALSE(traversable(drop(90, 0.8)));
  EXPECT_TRUE(traversable(drop(60, 0.45)));
  EXPECT_FALSE(traversable(drop(60, 0.46)));
  EXPECT_TRUE(traversable(drop(30, 0.45)));
  EXPECT_NEAR(drop_height_limit(75), 0.575, 1e-12);
  EXPECT_TRUE(traversable({TerrainKind::Slope, kStart, 1.0, 35.0, 1.2}));
  EXPECT_FALSE(traversable({TerrainKind::Slope, kStart, 1.0, 36.0, 0.1}));
  EXPECT_FALSE(traversable({TerrainKind::Slope, kStart, 1.0, 20.0, 1.3}));
  EXPECT_TRUE(traversable({TerrainKind::Obstacle, kStart, 1.0, 80.0, 0.2794}));
  EXPECT_FALSE(traversable({TerrainKind::Obstacle, kStart, 1.0, 80.0, 0.3}));
}

TEST(Traversable, MonotoneInHeight) {
  for (auto kind : {TerrainKind::VerticalDrop, TerrainKind::Slope, TerrainKind::Obstacle}) {
    for (double angle = 1.0; angle <= 90.0; angle += 1.0) {
      bool was_passable = true;
      for (double h = 0.01; h <= 2.0; h += 0.01) {
        const bool p = traversable({kind, kStart, 1.0, angle, h});
        ASSERT_FALSE(p && !was_passable) << to_string(kind) << " " << angle << " " << h;
        was_passable = p;
      }
    }
  }
}

TEST(Terrain, ValidateRejectsOutOfRange) {
  EXPECT_THROW(drop(0.0, 0.5).validate(), std::invalid_argument);
  EXPECT_THROW(drop(91.0, 0.5).validate(), std::invalid_argument);
  EXPECT_THROW(drop(45.0, 0.0).validate(), std::invalid_argument);
  EXPECT_NO_THROW(drop(90.0, 0.5).validate());
}

TEST(Gps, ZeroRadiusGivesTruePosition) {
  auto w = world_at();
  w.noise.gps_error_radius_m = 0.0;
  EXPECT_EQ(*sample_gps_fix(w).point, kStart);
  const auto parsed = nmea::to_fix(nmea::parse_sentence(sample_gps(w)));
  EXPECT_LT(offset_m(*parsed.point, kStart), 0.2) << "only NMEA rounding";
}

TEST(Gps, UniformDiskStatistics) {
  auto w = world_at();
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double d = offset_m(*sample_gps_fix(w).point, kStart);
    ASSERT_LE(d, 3.0 + 1e-9);
    sum += d;
  }
  EXPECT_NEAR(sum / 10000.0, oracle::uniform_disk_mean_radius(3.0), 0.1);
}

TEST(Gps, SameSeedSameSequence) {
  auto a = world_at(0, 77), b = world_at(0, 77), c = world_at(0, 78);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto sa = sample_gps(a);
    EXPECT_EQ(sa, sample_gps(b));
    differs |= sa != sample_gps(c);
  }
  EXPECT_TRUE(differs);
}

TEST(Compass, ZeroSigmaIsExact) {
  auto w = world_at(123.4);
  w.noise.compass_sigma_deg = 0.0;
  EXPECT_DOUBLE_EQ(sample_compass(w).value(), 123.4);
}

TEST(Compass, SigmaMatchesAndStaysWrapped) {
  auto w = world_at(359.0);
  double sum = 0.0, sq = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double h = sample_compass(w).value();
    ASSERT_GE(h, 0.0);
    ASSERT_LT(h, 360.0);
    const double e = std::remainder(h - 359.0, 360.0);
    sum += e;
    sq += e * e;
  }
  const double mean = sum / n;
  const double sigma = std::sqrt(sq / n - mean * mean);
  EXPECT_GE(sigma, 1.9);
  EXPECT_LE(sigma, 2.1);
}

TEST(Beacon, VisibilityRules) {
  auto w = world_at(0.0);
  w.beacons.push_back({geo::destination_point(kStart, geo::HeadingDeg(0), 3.4), 0});
  w.beacons.push_back({geo::destination_point(kStart, geo::HeadingDeg(0), 5.0), 1});
  w.beacons.push_back({geo::destination_point(kStart, geo::HeadingDeg(180), 2.0), 2});
  w.beacons.push_back({geo::destination_point(kStart, geo::HeadingDeg(80), 2.0), 3});

  const auto ahead = observe_beacon(w, 0);
  ASSERT_TRUE(ahead);
  EXPECT_NEAR(ahead->range_m, 3.4, 1e-6);
  EXPECT_NEAR(ahead->bearing_deg, 0.0, 1e-6);
  EXPECT_FALSE(observe_beacon(w, 1)) << "out of range";
  EXPECT_FALSE(observe_beacon(w, 2)) << "behind the camera";
  const auto side = observe_beacon(w, 3);
  ASSERT_TRUE(side) << "80 deg is inside the 165 deg field of view";
  EXPECT_NEAR(side->bearing_deg, 80.0, 1e-6);
  EXPECT_FALSE(observe_beacon(w, 9));
}
