#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aispath/domain/types.hpp"
#include "aispath/outlier/anomaly.hpp"

namespace aispath {

enum class RouteFamily { straight, arc, s_curve, loop_injected, sharp_turn_injected };
std::string_view to_string(RouteFamily f);
std::optional<RouteFamily> parse_route_family(std::string_view s);

struct SynthConfig {
  RouteFamily family = RouteFamily::straight;
  std::size_t count = 100;
  double duration_s = 10800.0;

  double speed_mean = 12.0;     // knots, per vessel
  double speed_jitter = 2.0;    // half-width of the uniform spread
  double interval_mean = 60.0;  // seconds between reports
  double interval_jitter = 20.0;
  double position_noise = 0.0;  // nmi, Gaussian sd per axis
  double course_noise = 0.0;    // degrees, Gaussian sd on reported cog
  double speed_noise = 0.0;     // knots, Gaussian sd on reported sog

  double lat_min = 30.0, lat_max = 40.0;
  double lon_min = -75.0, lon_max = -65.0;

  // arc family
  double turn_radius_min = 8.0;   // nmi
  double turn_radius_max = 20.0;
  int turn_sign = 0;  // +1 starboard, -1 port, 0 random per vessel
  // s-curve family: heading swings by +-amplitude with the given wavelength
  double sway_amplitude = 30.0;  // degrees
  double sway_wavelength_min = 10.0;  // nmi
  double sway_wavelength_max = 25.0;
  // loop family: turn through 360 - loop_gap degrees on a circle
  double loop_radius = 0.25;  // nmi
  double loop_gap = 40.0;     // degrees
  // sharp-turn family: interior angle at the apex
  double apex_angle = 35.0;  // degrees

  int vessel_type = 70;
  std::int64_t mmsi_base = 366000000;
  std::string id_prefix = "synth";
  double start_time = 1.6e9;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Injected anomaly of one trajectory. Loops cover the messages strictly
/// inside the closed loop and record the perimeter (nmi) of the idealized
/// path; turns cover the apex message and record the interior angle at the
/// apex in planar degree coordinates.
struct AnomalyTruth {
  std::size_t trajectory = 0;
  AnomalyKind kind = AnomalyKind::sharp_turn;
  std::size_t first = 0;
  std::size_t last = 0;
  double measure = 0.0;
};

struct SynthFleet {
  std::vector<Trajectory> trajectories;
  std::vector<AnomalyTruth> anomalies;
};

SynthFleet synth_generate(const SynthConfig& cfg);

}  // namespace aispath
