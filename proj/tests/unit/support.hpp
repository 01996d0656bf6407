#pragma once

// Shared fixtures and independent reference implementations for the tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "aispath/domain/types.hpp"

namespace aispath::test {

inline AisMessage msg(double tau, double lat, double lon, double sog = 10.0, double cog = 0.0) {
  AisMessage m;
  m.mmsi = 123456789;
  m.tau = tau;
  m.lat = lat;
  m.lon = lon;
  m.sog = sog;
  m.cog = cog;
  m.meta.vessel_type = 70;
  return m;
}

inline Trajectory make_trajectory(std::vector<AisMessage> msgs, std::string id = "t") {
  Trajectory t;
  t.id = std::move(id);
  if (!msgs.empty()) t.meta = msgs.front().meta;
  t.messages = std::move(msgs);
  return t;
}

// Constant planar velocity in degrees per second, one report every dt seconds.
inline Trajectory planar_track(std::size_t n, double dt, double lat0, double lon0, double vlat,
                               double vlon, double sog = 10.0, std::string id = "t") {
  std::vector<AisMessage> msgs;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    msgs.push_back(msg(1000.0 + t, lat0 + vlat * t, lon0 + vlon * t, sog, 45.0));
  }
  return make_trajectory(std::move(msgs), std::move(id));
}

// Hand-rolled property generator.
struct Gen {
  std::mt19937_64 eng;
  explicit Gen(std::uint64_t seed) : eng(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng);
  }
  std::size_t size(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(eng);
  }
  double normal(double sd) { return std::normal_distribution<double>(0.0, sd)(eng); }
  GeoPoint point() { return {uniform(-90.0, 90.0), uniform(-180.0, 180.0)}; }
};

// Great-circle distance from the angle between unit vectors, in long double.
// Uses atan2(|a x b|, a . b), which stays well conditioned for near and
// antipodal pairs, unlike the haversine form under test.
inline double oracle_distance(GeoPoint a, GeoPoint b, long double radius = 3440.0L) {
  const long double pi = 3.141592653589793238462643383279502884L;
  auto unit = [&](GeoPoint p) {
    const long double la = static_cast<long double>(p.lat) * pi / 180.0L;
    const long double lo = static_cast<long double>(p.lon) * pi / 180.0L;
    return std::vector<long double>{std::cos(la) * std::cos(lo), std::cos(la) * std::sin(lo),
                                    std::sin(la)};
  };
  const auto u = unit(a);
  const auto v = unit(b);
  const long double cx = u[1] * v[2] - u[2] * v[1];
  const long double cy = u[2] * v[0] - u[0] * v[2];
  const long double cz = u[0] * v[1] - u[1] * v[0];
  const long double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  const long double cr = std::sqrt(cx * cx + cy * cy + cz * cz);
  return static_cast<double>(radius * std::atan2(cr, dot));
}

inline double plane_distance(GeoPoint p, GeoPoint a, GeoPoint b) {
  const double dx = b.lat - a.lat;
  const double dy = b.lon - a.lon;
  const double len = std::hypot(dx, dy);
  if (len == 0.0) return std::hypot(p.lat - a.lat, p.lon - a.lon);
  return std::abs(dx * (p.lon - a.lon) - dy * (p.lat - a.lat)) / len;
}

// Recursive textbook RDP, counting splitting invocations.
inline void reference_rdp(const std::vector<GeoPoint>& pts, std::size_t lo, std::size_t hi,
                          double d0, std::vector<std::size_t>& keep, std::size_t& splits) {
  if (hi <= lo + 1) return;
  std::size_t best = lo;
  double best_d = d0;
  for (std::size_t k = lo + 1; k < hi; ++k) {
    const double d = plane_distance(pts[k], pts[lo], pts[hi]);
    if (d > best_d) {
      best_d = d;
      best = k;
    }
  }
  if (best == lo) return;
  ++splits;
  keep.push_back(best);
  reference_rdp(pts, lo, best, d0, keep, splits);
  reference_rdp(pts, best, hi, d0, keep, splits);
}

// Dense Gaussian elimination with partial pivoting; solves A X = B in place.
inline std::vector<std::vector<double>> gauss_solve(std::vector<std::vector<double>> a,
                                                    std::vector<std::vector<double>> b) {
  const std::size_t n = a.size();
  const std::size_t m = b.empty() ? 0 : b[0].size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      for (std::size_t k = 0; k < m; ++k) b[r][k] -= f * b[c][k];
    }
  }
  std::vector<std::vector<double>> x(n, std::vector<double>(m, 0.0));
  for (std::size_t c = n; c-- > 0;) {
    for (std::size_t k = 0; k < m; ++k) {
      double s = b[c][k];
      for (std::size_t j = c + 1; j < n; ++j) s -= a[c][j] * x[j][k];
      x[c][k] = s / a[c][c];
    }
  }
  return x;
}

}  // namespace aispath::test
