#include "aispath/outlier/rdp.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "aispath/domain/geo.hpp"

namespace aispath {

double point_line_distance(GeoPoint p, GeoPoint a, GeoPoint b) {
  const Eigen::Vector2d ab = planar_delta(a, b);
  const Eigen::Vector2d ap = planar_delta(a, p);
  const double len = ab.norm();
  if (len == 0.0) return ap.norm();
  return std::abs(ab.x() * ap.y() - ab.y() * ap.x()) / len;
}

std::vector<GeoPoint> positions_of(const Trajectory& t) {
  std::vector<GeoPoint> pts;
  pts.reserve(t.size());
  for (const auto& m : t.messages) pts.push_back(m.position());
  return pts;
}

namespace {

struct Segment {
  std::size_t lo;
  std::size_t hi;
};

}  // namespace

std::vector<std::size_t> rdp2_control_points(std::span<const GeoPoint> points, double d0,
                                             double delta_a, RdpStats* stats) {
  const std::size_t n = points.size();
  if (n == 0) return {};
  if (n == 1) return {0};
  const bool slope_filter = std::isfinite(delta_a);

  std::vector<std::size_t> keep{0, n - 1};
  // Explicit stack; trajectories can be long enough to make deep recursion
  // uncomfortable.
  std::vector<Segment> stack{{0, n - 1}};
  while (!stack.empty()) {
    const Segment seg = stack.back();
    stack.pop_back();
    if (stats) ++stats->calls;
    if (seg.hi - seg.lo < 2) continue;

    const GeoPoint first = points[seg.lo];
    const GeoPoint last = points[seg.hi];
    const bool secant_defined = first.lat != last.lat;
    const double secant = secant_defined ? (first.lon - last.lon) / (first.lat - last.lat) : 0.0;
    if (slope_filter && !secant_defined) continue;

    std::size_t min_idx = 0;
    std::size_t max_idx = 0;
    double min_d = 0.0;
    double max_d = 0.0;
    bool found = false;
    for (std::size_t k = seg.lo + 1; k < seg.hi; ++k) {
      const double d = point_line_distance(points[k], first, last);
      if (!(d > d0)) continue;
      if (slope_filter) {
        const auto a_k = mean_slope(points[k - 1], points[k], points[k + 1]);
        if (!a_k || !(std::abs(*a_k - secant) < delta_a)) continue;
      }
      if (!found || d < min_d) {
        min_d = d;
        min_idx = k;
      }
      if (!found || d > max_d) {
        max_d = d;
        max_idx = k;
      }
      found = true;
    }
    if (!found) continue;
    if (stats) ++stats->splitting_calls;

    const std::size_t a = std::min(min_idx, max_idx);
    const std::size_t b = std::max(min_idx, max_idx);
    keep.push_back(a);
    if (b != a) keep.push_back(b);
    // Pushed in reverse so segments are processed left to right.
    stack.push_back({b, seg.hi});
    if (b != a) stack.push_back({a, b});
    stack.push_back({seg.lo, a});
  }
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  return keep;
}

std::vector<std::size_t> rdp2_control_points(const Trajectory& t, double d0, double delta_a,
                                             RdpStats* stats) {
  const auto pts = positions_of(t);
  return rdp2_control_points(pts, d0, delta_a, stats);
}

std::vector<std::size_t> classic_rdp(std::span<const GeoPoint> points, double d0,
                                     RdpStats* stats) {
  const std::size_t n = points.size();
  if (n == 0) return {};
  if (n == 1) return {0};
  std::vector<std::size_t> keep{0, n - 1};
  std::vector<Segment> stack{{0, n - 1}};
  while (!stack.empty()) {
    const Segment seg = stack.back();
    stack.pop_back();
    if (stats) ++stats->calls;
    if (seg.hi - seg.lo < 2) continue;
    std::size_t best = 0;
    double best_d = d0;
    bool found = false;
    for (std::size_t k = seg.lo + 1; k < seg.hi; ++k) {
      const double d = point_line_distance(points[k], points[seg.lo], points[seg.hi]);
      if (d > best_d) {
        best_d = d;
        best = k;
        found = true;
      }
    }
    if (!found) continue;
    if (stats) ++stats->splitting_calls;
    keep.push_back(best);
    stack.push_back({best, seg.hi});
    stack.push_back({seg.lo, best});
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

}  // namespace aispath
