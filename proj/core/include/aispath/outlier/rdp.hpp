#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aispath/domain/types.hpp"

namespace aispath {

/// Call counters for the simplification routines. `splitting_calls` counts
/// invocations that selected at least one control point; `calls` counts
/// every invocation including leaves.
struct RdpStats {
  std::size_t calls = 0;
  std::size_t splitting_calls = 0;
};

/// Euclidean distance from p to the infinite line through a and b in planar
/// (lat, lon) degrees; distance to a when a == b.
double point_line_distance(GeoPoint p, GeoPoint a, GeoPoint b);

/// Slope-filtered min/max Ramer-Douglas-Peucker. Within each segment, interior
/// points farther than `d0` from the secant whose mean slope is within
/// `delta_a` of the secant slope qualify; the nearest and the farthest
/// qualifying points are both kept and the segment is split in three.
/// An infinite `delta_a` disables the slope filter.
/// Returns sorted control-point indices, endpoints included.
std::vector<std::size_t> rdp2_control_points(std::span<const GeoPoint> points, double d0,
                                             double delta_a, RdpStats* stats = nullptr);

std::vector<std::size_t> rdp2_control_points(const Trajectory& t, double d0, double delta_a,
                                             RdpStats* stats = nullptr);

/// Textbook RDP: split at the farthest point while it exceeds d0.
std::vector<std::size_t> classic_rdp(std::span<const GeoPoint> points, double d0,
                                     RdpStats* stats = nullptr);

std::vector<GeoPoint> positions_of(const Trajectory& t);

}  // namespace aispath
