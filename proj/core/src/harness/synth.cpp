#include "aispath/harness/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "aispath/domain/errors.hpp"
#include "aispath/domain/geo.hpp"
#include "aispath/util/random.hpp"

namespace aispath {

std::string_view to_string(RouteFamily f) {
  switch (f) {
    case RouteFamily::straight: return "straight";
    case RouteFamily::arc: return "arc";
    case RouteFamily::s_curve: return "s-curve";
    case RouteFamily::loop_injected: return "loop-injected";
    case RouteFamily::sharp_turn_injected: return "sharp-turn-injected";
  }
  return "straight";
}

std::optional<RouteFamily> parse_route_family(std::string_view s) {
  for (auto f : {RouteFamily::straight, RouteFamily::arc, RouteFamily::s_curve,
                 RouteFamily::loop_injected, RouteFamily::sharp_turn_injected})
    if (s == to_string(f)) return f;
  if (s == "s_curve") return RouteFamily::s_curve;
  return std::nullopt;
}

void SynthConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string("synth.") + name + " must be positive");
  };
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0)) throw ConfigError(std::string("synth.") + name + " must be non-negative");
  };
  if (count < 1) throw ConfigError("synth.count must be at least 1");
  positive(duration_s, "duration_s");
  positive(speed_mean, "speed_mean");
  non_negative(speed_jitter, "speed_jitter");
  if (!(speed_mean - speed_jitter > 0.0)) throw ConfigError("synth.speed_jitter must be below speed_mean");
  positive(interval_mean, "interval_mean");
  non_negative(interval_jitter, "interval_jitter");
  non_negative(position_noise, "position_noise");
  non_negative(course_noise, "course_noise");
  non_negative(speed_noise, "speed_noise");
  if (!(lat_min <= lat_max) || lat_min < -80.0 || lat_max > 80.0)
    throw ConfigError("synth latitude box must lie within [-80, 80]");
  if (!(lon_min <= lon_max) || lon_min < -180.0 || lon_max > 180.0)
    throw ConfigError("synth longitude box must lie within [-180, 180]");
  positive(turn_radius_min, "turn_radius_min");
  if (!(turn_radius_max >= turn_radius_min)) throw ConfigError("synth.turn_radius_max below min");
  if (turn_sign < -1 || turn_sign > 1) throw ConfigError("synth.turn_sign must be -1, 0 or 1");
  non_negative(sway_amplitude, "sway_amplitude");
  positive(sway_wavelength_min, "sway_wavelength_min");
  if (!(sway_wavelength_max >= sway_wavelength_min))
    throw ConfigError("synth.sway_wavelength_max below min");
  positive(loop_radius, "loop_radius");
  if (!(loop_gap > 0.0 && loop_gap < 180.0)) throw ConfigError("synth.loop_gap must lie in (0, 180)");
  if (!(apex_angle > 0.0 && apex_angle < 180.0))
    throw ConfigError("synth.apex_angle must lie in (0, 180)");
}

namespace {

// Planar path in nmi (x east, y north) made of constant-curvature pieces.
// Heading is degrees clockwise from north; curvature is radians per nmi,
// positive turning to starboard.
struct Piece {
  double start = 0.0;  // arc length at piece start
  double length = 0.0;
  double curvature = 0.0;
  double x = 0.0, y = 0.0, heading = 0.0;  // state at start (heading in radians)
};

struct PlanarState {
  double x, y, heading;
};

PlanarState advance(double x, double y, double psi, double kappa, double d) {
  if (std::abs(kappa) < 1e-12) return {x + d * std::sin(psi), y + d * std::cos(psi), psi};
  const double psi1 = psi + kappa * d;
  return {x + (std::cos(psi) - std::cos(psi1)) / kappa, y + (std::sin(psi1) - std::sin(psi)) / kappa,
          psi1};
}

class Path {
 public:
  explicit Path(double heading_deg) : heading_(deg2rad(heading_deg)) {}

  void add(double length, double curvature, double heading_jump_deg = 0.0) {
    heading_ += deg2rad(heading_jump_deg);
    pieces_.push_back({total_, length, curvature, x_, y_, heading_});
    const auto s = advance(x_, y_, heading_, curvature, length);
    x_ = s.x;
    y_ = s.y;
    heading_ = s.heading;
    total_ += length;
  }

  double length() const { return total_; }

  PlanarState at(double s) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), s,
                               [](double v, const Piece& p) { return v < p.start; });
    const Piece& p = it == pieces_.begin() ? pieces_.front() : *std::prev(it);
    return advance(p.x, p.y, p.heading, p.curvature, s - p.start);
  }

 private:
  std::vector<Piece> pieces_;
  double total_ = 0.0;
  double x_ = 0.0, y_ = 0.0, heading_ = 0.0;
};

GeoPoint to_geo(GeoPoint origin, double x, double y) {
  const double r = std::hypot(x, y);
  if (r == 0.0) return origin;
  return destination(origin, rad2deg(std::atan2(x, y)), r);
}

}  // namespace

SynthFleet synth_generate(const SynthConfig& cfg) {
  cfg.validate();
  SynthFleet fleet;
  fleet.trajectories.reserve(cfg.count);

  for (std::size_t i = 0; i < cfg.count; ++i) {
    Rng rng(mix_seed(cfg.seed, i));
    const GeoPoint origin{rng.uniform(cfg.lat_min, cfg.lat_max), rng.uniform(cfg.lon_min, cfg.lon_max)};
    const double heading0 = rng.uniform(0.0, 360.0);
    const double speed = cfg.speed_mean + cfg.speed_jitter * rng.uniform(-1.0, 1.0);
    const int sign = cfg.turn_sign != 0 ? cfg.turn_sign : (rng.uniform() < 0.5 ? -1 : 1);
    const double length = speed * cfg.duration_s / 3600.0;

    Path path(heading0);
    double anchor = -1.0;  // arc length that must carry a message
    double loop_in = 0.0, loop_out = 0.0, loop_perimeter = 0.0;
    switch (cfg.family) {
      case RouteFamily::straight:
        path.add(length, 0.0);
        break;
      case RouteFamily::arc: {
        const double radius = rng.uniform(cfg.turn_radius_min, cfg.turn_radius_max);
        path.add(length, sign / radius);
        break;
      }
      case RouteFamily::s_curve: {
        const double wavelength = rng.uniform(cfg.sway_wavelength_min, cfg.sway_wavelength_max);
        const double phase = rng.uniform(0.0, 2.0 * kPi);
        const double amp = deg2rad(cfg.sway_amplitude);
        // heading(s) = h0 + amp sin(2 pi s / wavelength + phase), integrated
        // with short constant-curvature pieces
        constexpr double kStep = 0.05;
        for (double s = 0.0; s < length; s += kStep) {
          const double d = std::min(kStep, length - s);
          const double mid = s + 0.5 * d;
          const double kappa =
              amp * 2.0 * kPi / wavelength * std::cos(2.0 * kPi * mid / wavelength + phase);
          path.add(d, kappa);
        }
        break;
      }
      case RouteFamily::loop_injected: {
        const double start = rng.uniform(0.3, 0.6) * length;
        const double gap = deg2rad(cfg.loop_gap);
        const double arc = cfg.loop_radius * (2.0 * kPi - gap);
        const double lead = cfg.loop_radius * std::tan(0.5 * gap);
        path.add(start, 0.0);
        path.add(arc, sign / cfg.loop_radius);
        path.add(std::max(length - start - arc, 1.0), 0.0);
        loop_in = start - lead;
        loop_out = start + arc + lead;
        loop_perimeter = arc + 2.0 * lead;
        break;
      }
      case RouteFamily::sharp_turn_injected: {
        anchor = rng.uniform(0.3, 0.6) * length;
        path.add(anchor, 0.0);
        path.add(length - anchor, 0.0, sign * (180.0 - cfg.apex_angle));
        break;
      }
    }

    // reporting times, then arc lengths at constant speed
    std::vector<double> times;
    for (double t = 0.0; t <= cfg.duration_s;
         t += std::max(1.0, cfg.interval_mean + cfg.interval_jitter * rng.uniform(-1.0, 1.0)))
      times.push_back(t);
    std::vector<double> arc_len(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) arc_len[k] = speed * times[k] / 3600.0;
    std::size_t apex = 0;
    if (anchor >= 0.0) {
      auto it = std::lower_bound(arc_len.begin(), arc_len.end(), anchor);
      apex = static_cast<std::size_t>(it - arc_len.begin());
      if (apex > 0 && (apex == arc_len.size() || anchor - arc_len[apex - 1] < arc_len[apex] - anchor))
        --apex;
      arc_len[apex] = anchor;
      times[apex] = anchor / speed * 3600.0;
    }

    Trajectory t;
    char id[64];
    std::snprintf(id, sizeof id, "%s-%04zu", cfg.id_prefix.c_str(), i);
    t.id = id;
    t.meta.vessel_type = cfg.vessel_type;
    const double hull = rng.uniform(100.0, 300.0);
    t.meta.length = std::round(hull);
    t.meta.width = std::round(hull / 6.5);
    t.meta.draft = std::round(rng.uniform(6.0, 14.0) * 10.0) / 10.0;

    std::vector<GeoPoint> clean(times.size());
    t.messages.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double s = arc_len[k];
      const PlanarState p = path.at(s);
      clean[k] = to_geo(origin, p.x, p.y);
      // course from the noise-free motion just ahead (outgoing at a corner)
      const PlanarState q = path.at(s + 1e-4);
      double cog = initial_bearing(clean[k], to_geo(origin, q.x, q.y));
      const double nx = cfg.position_noise > 0.0 ? rng.normal(0.0, cfg.position_noise) : 0.0;
      const double ny = cfg.position_noise > 0.0 ? rng.normal(0.0, cfg.position_noise) : 0.0;
      const GeoPoint pos = (nx == 0.0 && ny == 0.0) ? clean[k] : to_geo(origin, p.x + nx, p.y + ny);
      if (cfg.course_noise > 0.0) cog = normalize_degrees(cog + rng.normal(0.0, cfg.course_noise));
      double sog = speed;
      if (cfg.speed_noise > 0.0) sog = std::max(0.1, sog + rng.normal(0.0, cfg.speed_noise));

      AisMessage m;
      m.mmsi = cfg.mmsi_base + static_cast<std::int64_t>(i);
      m.tau = cfg.start_time + 3600.0 * static_cast<double>(i) + times[k];
      m.lat = pos.lat;
      m.lon = pos.lon;
      m.sog = sog;
      m.cog = cog;
      m.heading = cog;
      m.meta = t.meta;
      t.messages.push_back(m);
    }

    if (cfg.family == RouteFamily::loop_injected) {
      AnomalyTruth a{i, AnomalyKind::self_crossing, 0, 0, loop_perimeter};
      a.first = static_cast<std::size_t>(
          std::upper_bound(arc_len.begin(), arc_len.end(), loop_in) - arc_len.begin());
      a.last = static_cast<std::size_t>(
                   std::lower_bound(arc_len.begin(), arc_len.end(), loop_out) - arc_len.begin()) -
               1;
      fleet.anomalies.push_back(a);
    } else if (cfg.family == RouteFamily::sharp_turn_injected && apex > 0 && apex + 1 < clean.size()) {
      const Eigen::Vector2d v1 = planar_delta(clean[apex - 1], clean[apex]);
      const Eigen::Vector2d v2 = planar_delta(clean[apex + 1], clean[apex]);
      fleet.anomalies.push_back({i, AnomalyKind::sharp_turn, apex, apex, angle_between(v1, v2)});
    }
    fleet.trajectories.push_back(std::move(t));
  }
  return fleet;
}

}  // namespace aispath
