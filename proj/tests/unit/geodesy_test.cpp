#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rover/geodesy.hpp"

using namespace rover::geo;

namespace {

// Frozen from the arc-length oracle R * (pi/180) and R * pi with R = 6,371,000 m.
constexpr double kOneDegreeArcM = 111194.92664455874;
constexpr double kHalfCircumferenceM = 20015086.79602057;

}  // namespace

TEST(GeoPoint, NormalizesLongitude) {
  EXPECT_DOUBLE_EQ(GeoPoint(0, 190).lon(), -170.0);
  EXPECT_DOUBLE_EQ(GeoPoint(0, -180).lon(), 180.0);
  EXPECT_DOUBLE_EQ(GeoPoint(0, 540).lon(), 180.0);
  EXPECT_DOUBLE_EQ(GeoPoint(0, -190).lon(), 170.0);
}

TEST(GeoPoint, RejectsLatitudeOutOfRange) {
  EXPECT_THROW(GeoPoint(90.0001, 0), std::invalid_argument);
  EXPECT_THROW(GeoPoint(-91, 0), std::invalid_argument);
  EXPECT_THROW(GeoPoint(NAN, 0), std::invalid_argument);
  EXPECT_NO_THROW(GeoPoint(-90, 0));
}

TEST(HeadingDeg, WrapsIntoHalfOpenRange) {
  EXPECT_DOUBLE_EQ(HeadingDeg(360).value(), 0.0);
  EXPECT_DOUBLE_EQ(HeadingDeg(-90).value(), 270.0);
  EXPECT_DOUBLE_EQ(HeadingDeg(725).value(), 5.0);
  EXPECT_LT(HeadingDeg(-1e-18).value(), 360.0);
}

TEST(EarthModel, RadiusMustBePositive) {
  EXPECT_THROW(EarthModel(0.0), std::invalid_argument);
  EXPECT_THROW(EarthModel(-5.0), std::invalid_argument);
  EXPECT_DOUBLE_EQ(EarthModel().radius_m, 6'371'000.0);
}

TEST(Haversine, IdenticalPointsAreZero) {
  EXPECT_EQ(haversine_distance({23.78, 90.42}, {23.78, 90.42}), 0.0);
}

TEST(Haversine, OneDegreeOfEquator) {
  EXPECT_NEAR(haversine_distance({0, 0}, {0, 1}), kOneDegreeArcM, 1e-6);
}

TEST(Haversine, Antipodal) {
  EXPECT_NEAR(haversine_distance({0, 0}, {0, 180}), kHalfCircumferenceM, 1e-6);
}

TEST(Haversine, ScalesWithEarthRadius) {
  EXPECT_NEAR(haversine_distance({0, 0}, {0, 1}, EarthModel(1.0)), oracle::rad(1.0), 1e-15);
}

TEST(Haversine, SymmetricAndTriangleInequality) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  for (int i = 0; i < 2000; ++i) {
    GeoPoint a(lat(rng), lon(rng)), b(lat(rng), lon(rng)), c(lat(rng), lon(rng));
    ASSERT_EQ(haversine_distance(a, b), haversine_distance(b, a));
    ASSERT_LE(haversine_distance(a, c),
              haversine_distance(a, b) + haversine_distance(b, c) + 1e-6);
  }
}

TEST(Haversine, AgreesWithVincentyOracle) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  int checked = 0;
  while (checked < 1000) {
    GeoPoint a(lat(rng), lon(rng)), b(lat(rng), lon(rng));
    const double ref = oracle::vincenty_distance(a.lat(), a.lon(), b.lat(), b.lon());
    if (ref <= 1000.0) continue;
    ASSERT_LT(std::abs(haversine_distance(a, b) - ref) / ref, 1e-9);
    ++checked;
  }
}

TEST(InitialBearing, CardinalDirections) {
  EXPECT_NEAR(initial_bearing({0, 0}, {1, 0}).value(), 0.0, 1e-12);
  EXPECT_NEAR(initial_bearing({0, 0}, {0, 1}).value(), 90.0, 1e-12);
  EXPECT_NEAR(initial_bearing({0, 0}, {-1, 0}).value(), 180.0, 1e-12);
  EXPECT_NEAR(initial_bearing({0, 0}, {0, -1}).value(), 270.0, 1e-12);
}

TEST(InitialBearing, DegenerateForIdenticalAndAntipodalPoints) {
  EXPECT_THROW(initial_bearing({12.5, 77.0}, {12.5, 77.0}), DegenerateBearing);
  EXPECT_THROW(initial_bearing({0, 0}, {0, 180}), DegenerateBearing);
}

TEST(DestinationPoint, ZeroTravelIsIdentity) {
  EXPECT_EQ(destination_point({0, 0}, HeadingDeg(0), 0.0), GeoPoint(0, 0));
}

TEST(DestinationPoint, InvertsOneDegreeArc) {
  const GeoPoint p = destination_point({0, 0}, HeadingDeg(90), kOneDegreeArcM);
  EXPECT_NEAR(p.lat(), 0.0, 1e-6);
  EXPECT_NEAR(p.lon(), 1.0, 1e-6);
}

TEST(DestinationPoint, RejectsNegativeDistance) {
  EXPECT_THROW(destination_point({0, 0}, HeadingDeg(0), -1.0), std::invalid_argument);
}

TEST(DestinationPoint, RoundTripsDistanceAndBearing) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> bearing(0, 360);
  std::uniform_real_distribution<double> log_dist(0.0, 6.0);  // 1 m .. 1000 km
  const GeoPoint origin(10, 20);
  for (int i = 0; i < 2000; ++i) {
    const double d = std::pow(10.0, log_dist(rng));
    const HeadingDeg theta(bearing(rng));
    const GeoPoint end = destination_point(origin, theta, d);
    ASSERT_NEAR(haversine_distance(origin, end), d, 1e-6 * d);
    ASSERT_NEAR(angular_difference(initial_bearing(origin, end), theta), 0.0, 1e-6 * 360.0);
  }
}

TEST(AngularDifference, Examples) {
  EXPECT_DOUBLE_EQ(angular_difference(HeadingDeg(0), HeadingDeg(90)), 90.0);
  EXPECT_DOUBLE_EQ(angular_difference(HeadingDeg(350), HeadingDeg(10)), 20.0);
  EXPECT_DOUBLE_EQ(angular_difference(HeadingDeg(10), HeadingDeg(350)), -20.0);
  EXPECT_DOUBLE_EQ(angular_difference(HeadingDeg(0), HeadingDeg(180)), 180.0);
  EXPECT_DOUBLE_EQ(angular_difference(HeadingDeg(180), HeadingDeg(0)), 180.0);
}

TEST(AngularDifference, RangeAndComposition) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> h(-720, 720);
  for (int i = 0; i < 10000; ++i) {
    const HeadingDeg cur(h(rng)), tgt(h(rng));
    const double d = angular_difference(cur, tgt);
    ASSERT_GT(d, -180.0);
    ASSERT_LE(d, 180.0);
    ASSERT_NEAR(angular_difference(HeadingDeg(cur.value() + d), tgt), 0.0, 1e-9);
  }
}
