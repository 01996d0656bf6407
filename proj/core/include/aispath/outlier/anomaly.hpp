#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "aispath/domain/types.hpp"

namespace aispath {

struct OutlierConfig {
  double d0_rdp = 0.01;         // degrees, planar point-to-secant distance
  double delta_a = 0.2;         // slope tolerance; infinity disables the slope filter
  double delta_theta = 60.0;    // sharp-turn threshold, degrees
  double loop_len_max = 2.0;    // nmi
  std::size_t removal_window = 2;
  std::size_t min_fragment = 16;  // fragments shorter than this are dropped

  void validate() const;
};

enum class AnomalyKind { sharp_turn, self_crossing };

std::string_view to_string(AnomalyKind k);

/// A detected anomalous motion pattern. Sharp turns cover a single message
/// (first == last); self-crossings cover the messages strictly inside the loop.
struct AnomalyMark {
  AnomalyKind kind = AnomalyKind::sharp_turn;
  std::size_t first = 0;
  std::size_t last = 0;
  double measure = 0.0;  // turn angle in degrees, or loop length in nmi

  friend bool operator==(const AnomalyMark&, const AnomalyMark&) = default;
};

struct SegmentCrossing {
  double alpha = 0.0;
  double beta = 0.0;
  GeoPoint point;
};

/// Intersection of segments p1p2 and p3p4 in planar (lat, lon) coordinates.
/// Empty when they do not meet or are parallel. Throws std::domain_error for
/// a zero-length segment.
std::optional<SegmentCrossing> segment_intersection(GeoPoint p1, GeoPoint p2, GeoPoint p3,
                                                    GeoPoint p4);

std::vector<AnomalyMark> detect_sharp_turns(const Trajectory& t, const OutlierConfig& cfg);

/// Loops closed by a crossing of two non-adjacent segments whose along-path
/// length is below cfg.loop_len_max. Overlapping loops are merged.
std::vector<AnomalyMark> detect_self_crossings(const Trajectory& t, const OutlierConfig& cfg);

/// Both detectors, sorted by first index.
std::vector<AnomalyMark> detect_anomalies(const Trajectory& t, const OutlierConfig& cfg);

/// Cuts the marked messages out and returns the remaining runs that are at
/// least cfg.min_fragment long. Fragments get "#<n>" appended to the id when
/// anything was cut.
std::vector<Trajectory> split_at_anomalies(const Trajectory& t, std::vector<AnomalyMark> marks,
                                           const OutlierConfig& cfg);

}  // namespace aispath
