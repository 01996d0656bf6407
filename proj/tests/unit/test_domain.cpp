#include <cmath>

#include <gtest/gtest.h>

#include "aispath/domain/errors.hpp"
#include "aispath/domain/geo.hpp"
#include "aispath/domain/validate.hpp"
#include "support.hpp"

using namespace aispath;
using aispath::test::Gen;

TEST(GeoDistance, IdenticalPointsAreZero) {
  EXPECT_EQ(geo_distance({10, 20}, {10, 20}), 0.0);
}

TEST(GeoDistance, QuarterAndHalfEquator) {
  const double quarter = 2.0 * 3440.0 * std::asin(std::sqrt(0.5));
  EXPECT_NEAR(geo_distance({0, 0}, {0, 90}), quarter, 1e-9 * quarter);
  EXPECT_NEAR(geo_distance({0, 0}, {0, 90}), 3440.0 * kPi / 2.0, 1e-9);
  EXPECT_NEAR(geo_distance({0, 0}, {0, 90}), 5403.54, 0.01);
  EXPECT_NEAR(geo_distance({0, 0}, {0, 180}), 3440.0 * kPi, 1e-9);
  EXPECT_NEAR(geo_distance({0, 0}, {0, 180}), 10807.08, 0.01);
}

TEST(GeoDistance, OneDegreeOfMeridian) {
  EXPECT_NEAR(geo_distance({10, 5}, {11, 5}), 3440.0 * kPi / 180.0, 1e-9);
}

TEST(GeoDistance, RejectsOutOfRange) {
  EXPECT_THROW(geo_distance({91, 0}, {0, 0}), ValidationError);
  EXPECT_THROW(geo_distance({0, 0}, {0, -180.5}), ValidationError);
  EXPECT_THROW(geo_distance({NAN, 0}, {0, 0}), ValidationError);
}

TEST(GeoDistance, MatchesVectorOracle) {
  Gen g(11);
  for (int i = 0; i < 2000; ++i) {
    const GeoPoint a = g.point();
    const GeoPoint b = g.point();
    const double want = test::oracle_distance(a, b);
    EXPECT_NEAR(geo_distance(a, b), want, 1e-9 * want);
  }
}

TEST(GeoDistance, SymmetricNonNegativeTriangle) {
  Gen g(12);
  for (int i = 0; i < 2000; ++i) {
    const GeoPoint a = g.point(), b = g.point(), c = g.point();
    const double ab = geo_distance(a, b);
    EXPECT_EQ(ab, geo_distance(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, geo_distance(a, c) + geo_distance(c, b) + 1e-9);
  }
}

TEST(GeoDistance, SmallNeighbourhoodTriangle) {
  Gen g(13);
  for (int i = 0; i < 2000; ++i) {
    const GeoPoint a = g.point();
    if (std::abs(a.lat) > 89.0) continue;
    auto near = [&] { return GeoPoint{a.lat + g.uniform(-0.1, 0.1), a.lon + g.uniform(-0.1, 0.1)}; };
    const GeoPoint b = near(), c = near();
    if (!valid_coordinates(b) || !valid_coordinates(c)) continue;
    EXPECT_LE(geo_distance(a, b), geo_distance(a, c) + geo_distance(c, b) + 1e-12);
  }
}

TEST(Destination, InvertsDistanceAndBearing) {
  Gen g(14);
  for (int i = 0; i < 500; ++i) {
    const GeoPoint a{g.uniform(-70, 70), g.uniform(-179, 179)};
    const double bearing = g.uniform(0, 360);
    const double d = g.uniform(0.1, 500);
    const GeoPoint b = destination(a, bearing, d);
    EXPECT_NEAR(geo_distance(a, b), d, 1e-7 * d);
    EXPECT_NEAR(std::remainder(initial_bearing(a, b) - bearing, 360.0), 0.0, 1e-6);
  }
}

TEST(Destination, WrapsAcrossAntimeridian) {
  const GeoPoint b = destination({0, 179.9}, 90.0, 60.0);
  EXPECT_GE(b.lon, -180.0);
  EXPECT_LT(b.lon, -179.0);
}

TEST(AngleBetween, BasicCases) {
  EXPECT_DOUBLE_EQ(angle_between({1, 0}, {0, 1}), 90.0);
  EXPECT_DOUBLE_EQ(angle_between({1, 0}, {1, 0}), 0.0);
  EXPECT_DOUBLE_EQ(angle_between({1, 0}, {-1, 0}), 180.0);
  EXPECT_NEAR(angle_between({1, 0}, {1, 1}), 45.0, 1e-12);
}

TEST(AngleBetween, ZeroVectorIsDomainError) {
  EXPECT_THROW(angle_between({0, 0}, {1, 0}), std::domain_error);
  EXPECT_THROW(angle_between({1, 0}, {0, 0}), std::domain_error);
}

TEST(AngleBetween, ScaleInvariant) {
  Gen g(15);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector2d a{g.uniform(-5, 5), g.uniform(-5, 5)};
    const Eigen::Vector2d b{g.uniform(-5, 5), g.uniform(-5, 5)};
    const double s = g.uniform(0.01, 100), t = g.uniform(0.01, 100);
    const double base = angle_between(a, b);
    EXPECT_NEAR(angle_between(s * a, t * b), base, 1e-9);
    EXPECT_GE(base, 0.0);
    EXPECT_LE(base, 180.0);
  }
}

TEST(MeanSlope, Examples) {
  EXPECT_DOUBLE_EQ(*mean_slope({0, 0}, {1, 1}, {2, 2}), 1.0);
  EXPECT_DOUBLE_EQ(*mean_slope({0, 0}, {1, 0}, {2, 2}), 1.0);
  EXPECT_FALSE(mean_slope({0, 0}, {0, 1}, {1, 2}).has_value());
  EXPECT_FALSE(mean_slope({0, 0}, {1, 1}, {1, 2}).has_value());
}

TEST(NormalizeDegrees, WrapsIntoRange) {
  EXPECT_EQ(normalize_degrees(360.0), 0.0);
  EXPECT_EQ(normalize_degrees(-90.0), 270.0);
  EXPECT_EQ(normalize_degrees(725.0), 5.0);
  EXPECT_LT(normalize_degrees(-1e-18), 360.0);
}

TEST(ValidateMessage, Examples) {
  SpeedLimits lim;
  auto m = test::msg(0, 91, 0, 12);
  auto r = validate_message(m, lim);
  EXPECT_FALSE(r.accepted());
  EXPECT_EQ(r.reason, RejectReason::latitude);

  m = test::msg(0, 45, -122, -1);
  r = validate_message(m, lim);
  EXPECT_FALSE(r.accepted());
  EXPECT_EQ(r.reason, RejectReason::speed);

  m = test::msg(0, 45, -122, 12);
  r = validate_message(m, lim);
  ASSERT_TRUE(r.accepted());
  EXPECT_EQ(r.reason, RejectReason::none);
}

TEST(ValidateMessage, LongitudeAndSpeedCaps) {
  SpeedLimits lim;
  EXPECT_EQ(validate_message(test::msg(0, 0, 181, 5), lim).reason, RejectReason::longitude);
  auto m = test::msg(0, 0, 0, 25);
  m.meta.vessel_type = 52;  // tug, cap 20
  EXPECT_EQ(validate_message(m, lim).reason, RejectReason::speed);
  m.meta.vessel_type = 70;  // cargo, cap 30
  EXPECT_TRUE(validate_message(m, lim).accepted());
  m.sog = 30.0;
  EXPECT_TRUE(validate_message(m, lim).accepted());
  m.sog = 0.0;
  EXPECT_EQ(validate_message(m, lim).reason, RejectReason::speed);
  m.sog = 45.0;
  m.meta.vessel_type = 0;  // other, cap 50
  EXPECT_TRUE(validate_message(m, lim).accepted());
}

TEST(ValidateMessage, NormalizesCourse) {
  auto m = test::msg(0, 10, 10, 5, 360.0);
  m.heading = -10.0;
  auto r = validate_message(m, SpeedLimits{});
  ASSERT_TRUE(r.accepted());
  EXPECT_EQ(r.message->cog, 0.0);
  EXPECT_EQ(*r.message->heading, 350.0);
}

TEST(ValidateMessage, NanIsRejected) {
  EXPECT_FALSE(validate_message(test::msg(0, NAN, 0, 5), SpeedLimits{}).accepted());
  EXPECT_FALSE(validate_message(test::msg(0, 0, 0, NAN), SpeedLimits{}).accepted());
}

TEST(VesselCategory, MapsTypeCodes) {
  EXPECT_EQ(category_of(70), VesselCategory::cargo);
  EXPECT_EQ(category_of(84), VesselCategory::tanker);
  EXPECT_EQ(category_of(52), VesselCategory::tug);
  EXPECT_EQ(category_of(31), VesselCategory::towing);
  EXPECT_EQ(category_of(36), VesselCategory::other);
  EXPECT_EQ(*parse_vessel_category("tanker"), VesselCategory::tanker);
  EXPECT_FALSE(parse_vessel_category("submarine"));
}

TEST(SpeedLimits, RejectsNonPositiveCap) {
  SpeedLimits lim;
  lim.caps[VesselCategory::tug] = 0.0;
  EXPECT_THROW(lim.validate(), ConfigError);
}
