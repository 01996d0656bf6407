#pragma once

#include <cstddef>
#include <vector>

#include "aispath/domain/types.hpp"
#include "aispath/domain/validate.hpp"

namespace aispath {

struct PreprocessConfig {
  double s0 = 5.0;            // SOG jump threshold, knots
  double d0_filter = 0.5;     // distance consistency tolerance, nmi
  double t0 = 1800.0;         // gap time threshold, seconds
  double t_ref = 180.0;       // nominal reporting interval for gap fill, seconds
  SpeedLimits s_max;
  std::size_t min_messages = 2;

  void validate() const;
};

struct FilterReport {
  std::size_t front_truncated = 0;
  std::size_t dropped_duplicate_time = 0;
  std::size_t dropped_invalid_position = 0;
  std::size_t repaired_sog = 0;
  std::size_t interpolated_points = 0;
  bool discarded = false;

  FilterReport& operator+=(const FilterReport& o);
};

struct FilterResult {
  Trajectory trajectory;
  FilterReport report;
};

/// Drops leading messages until the first one that passes validate_message.
/// Returns an empty trajectory when none does.
Trajectory initialize_front(const Trajectory& t, const SpeedLimits& limits);

/// Linear fill of a reporting gap: the m-1 interior points of the split of
/// [a, b] into m equal steps. Static fields come from `a`; angles are
/// interpolated along the shorter arc. Requires m >= 3 and a.tau < b.tau.
std::vector<AisMessage> interpolate_gap(const AisMessage& a, const AisMessage& b, int m);

/// Duplicate-time removal, SOG repair, gap interpolation and the COG sine
/// transform. The result is a fixed point: filtering it again changes nothing.
FilterResult filter_trajectory(const Trajectory& t, const PreprocessConfig& cfg);

}  // namespace aispath
