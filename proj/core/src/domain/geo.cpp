#include "aispath/domain/geo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "aispath/domain/errors.hpp"

namespace aispath {

double normalize_degrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  // fmod of tiny negatives can round up to exactly 360
  if (r >= 360.0) r -= 360.0;
  return r;
}

bool valid_coordinates(GeoPoint p) {
  return p.lat >= -90.0 && p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

double geo_distance(GeoPoint a, GeoPoint b) {
  if (!valid_coordinates(a) || !valid_coordinates(b)) {
    throw ValidationError("geo_distance: coordinates out of range");
  }
  const double lat1 = deg2rad(a.lat);
  const double lat2 = deg2rad(b.lat);
  const double hx = std::pow(std::sin((lat2 - lat1) / 2.0), 2);
  const double hy = std::pow(std::sin(deg2rad(b.lon - a.lon) / 2.0), 2);
  const double h = std::min(1.0, hx + std::cos(lat1) * std::cos(lat2) * hy);
  return 2.0 * kEarthRadiusNmi * std::asin(std::sqrt(h));
}

double angle_between(const Eigen::Vector2d& v1, const Eigen::Vector2d& v2) {
  const double n1 = v1.norm();
  const double n2 = v2.norm();
  if (n1 == 0.0 || n2 == 0.0) {
    throw std::domain_error("angle_between: zero vector");
  }
  const double c = std::clamp(v1.dot(v2) / (n1 * n2), -1.0, 1.0);
  return rad2deg(std::acos(c));
}

std::optional<double> mean_slope(GeoPoint p1, GeoPoint p2, GeoPoint p3) {
  if (p2.lat == p1.lat || p3.lat == p2.lat) return std::nullopt;
  const double a1 = (p2.lon - p1.lon) / (p2.lat - p1.lat);
  const double a2 = (p3.lon - p2.lon) / (p3.lat - p2.lat);
  return (a1 + a2) / 2.0;
}

GeoPoint destination(GeoPoint start, double bearing_deg, double distance_nmi) {
  const double delta = distance_nmi / kEarthRadiusNmi;
  const double theta = deg2rad(bearing_deg);
  const double phi1 = deg2rad(start.lat);
  const double lambda1 = deg2rad(start.lon);
  const double sin_phi2 =
      std::sin(phi1) * std::cos(delta) + std::cos(phi1) * std::sin(delta) * std::cos(theta);
  const double phi2 = std::asin(std::clamp(sin_phi2, -1.0, 1.0));
  const double lambda2 =
      lambda1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(phi1),
                           std::cos(delta) - std::sin(phi1) * sin_phi2);
  double lon = rad2deg(lambda2);
  if (lon > 180.0 || lon < -180.0) lon = normalize_degrees(lon + 180.0) - 180.0;
  return {rad2deg(phi2), lon};
}

double initial_bearing(GeoPoint from, GeoPoint to) {
  const double phi1 = deg2rad(from.lat);
  const double phi2 = deg2rad(to.lat);
  const double dl = deg2rad(to.lon - from.lon);
  const double y = std::sin(dl) * std::cos(phi2);
  const double x = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dl);
  return normalize_degrees(rad2deg(std::atan2(y, x)));
}

}  // namespace aispath
