#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace aispath {

/// Geographic position in decimal degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Static vessel description carried by every AIS report.
struct VesselMeta {
  int vessel_type = 0;  // AIS ship-and-cargo type code, 0 = not available
  std::optional<double> length;  // meters
  std::optional<double> width;   // meters
  std::optional<double> draft;   // meters

  friend bool operator==(const VesselMeta&, const VesselMeta&) = default;
};

/// One timestamped kinematic + static report from a vessel.
struct AisMessage {
  std::int64_t mmsi = 0;
  double tau = 0.0;  // seconds since epoch, UTC
  double lat = 0.0;
  double lon = 0.0;
  double sog = 0.0;  // knots
  double cog = 0.0;  // degrees clockwise from north, [0, 360)
  std::optional<double> heading;
  VesselMeta meta;

  // Set by the filter stage. The raw cog is kept for dead reckoning and
  // geometry; the sine is what the learner sees.
  std::optional<double> cog_sine;
  // True for points synthesized by gap interpolation.
  bool interpolated = false;

  GeoPoint position() const { return {lat, lon}; }

  friend bool operator==(const AisMessage&, const AisMessage&) = default;
};

/// Chronologically sorted messages of one vessel voyage.
struct Trajectory {
  std::string id;
  VesselMeta meta;
  std::vector<AisMessage> messages;

  std::size_t size() const { return messages.size(); }
  bool empty() const { return messages.empty(); }
  std::int64_t mmsi() const { return messages.empty() ? 0 : messages.front().mmsi; }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

}  // namespace aispath
