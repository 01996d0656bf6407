#pragma once

#include <optional>

#include <Eigen/Core>

#include "aispath/domain/types.hpp"

namespace aispath {

// Spherical earth model used for every distance in the pipeline.
inline constexpr double kEarthRadiusNmi = 3440.0;
inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle in degrees into [0, 360).
double normalize_degrees(double deg);

bool valid_coordinates(GeoPoint p);

/// Haversine great-circle distance in nautical miles.
/// Throws ValidationError when either point is out of range.
double geo_distance(GeoPoint a, GeoPoint b);

/// Unsigned angle between two planar vectors, in degrees [0, 180].
/// Throws std::domain_error if either vector is zero.
double angle_between(const Eigen::Vector2d& v1, const Eigen::Vector2d& v2);

/// Mean of the two chord slopes (dlon/dlat) around p2. Empty when either chord
/// is vertical (equal latitudes), i.e. the slope is undefined.
std::optional<double> mean_slope(GeoPoint p1, GeoPoint p2, GeoPoint p3);

/// Point reached by travelling `distance_nmi` along the great circle leaving
/// `start` with initial bearing `bearing_deg`.
GeoPoint destination(GeoPoint start, double bearing_deg, double distance_nmi);

/// Initial great-circle bearing from `from` to `to`, degrees in [0, 360).
double initial_bearing(GeoPoint from, GeoPoint to);

/// Planar (lat, lon) difference vector b - a in degrees.
inline Eigen::Vector2d planar_delta(GeoPoint a, GeoPoint b) {
  return {b.lat - a.lat, b.lon - a.lon};
}

}  // namespace aispath
