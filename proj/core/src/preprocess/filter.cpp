#include "aispath/preprocess/filter.hpp"

#include <cmath>
#include <stdexcept>

#include "aispath/domain/errors.hpp"
#include "aispath/domain/geo.hpp"

namespace aispath {

void PreprocessConfig::validate() const {
  if (!(s0 > 0.0)) throw ConfigError("preprocess.s0 must be positive");
  if (!(d0_filter > 0.0)) throw ConfigError("preprocess.d0_filter must be positive");
  if (!(t0 > 0.0)) throw ConfigError("preprocess.t0 must be positive");
  if (!(t_ref > 0.0)) throw ConfigError("preprocess.t_ref must be positive");
  if (min_messages < 1) throw ConfigError("preprocess.min_messages must be at least 1");
  s_max.validate();
}

FilterReport& FilterReport::operator+=(const FilterReport& o) {
  front_truncated += o.front_truncated;
  dropped_duplicate_time += o.dropped_duplicate_time;
  dropped_invalid_position += o.dropped_invalid_position;
  repaired_sog += o.repaired_sog;
  interpolated_points += o.interpolated_points;
  return *this;
}

Trajectory initialize_front(const Trajectory& t, const SpeedLimits& limits) {
  Trajectory out;
  out.id = t.id;
  out.meta = t.meta;
  std::size_t first = 0;
  while (first < t.messages.size() && !validate_message(t.messages[first], limits).accepted()) {
    ++first;
  }
  if (first == t.messages.size()) return out;
  out.messages.assign(t.messages.begin() + static_cast<std::ptrdiff_t>(first), t.messages.end());
  out.messages.front() = *validate_message(out.messages.front(), limits).message;
  out.meta = out.messages.front().meta;
  return out;
}

namespace {

double lerp_angle(double a, double b, double frac) {
  double diff = normalize_degrees(b - a);
  if (diff > 180.0) diff -= 360.0;
  return normalize_degrees(a + diff * frac);
}

}  // namespace

std::vector<AisMessage> interpolate_gap(const AisMessage& a, const AisMessage& b, int m) {
  if (m < 3) throw std::invalid_argument("interpolate_gap: m must be >= 3");
  if (!(a.tau < b.tau)) throw std::invalid_argument("interpolate_gap: a.tau must precede b.tau");
  std::vector<AisMessage> out;
  out.reserve(static_cast<std::size_t>(m - 1));
  for (int i = 1; i < m; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(m);
    AisMessage g = a;
    g.tau = a.tau + (b.tau - a.tau) * frac;
    g.lat = a.lat + (b.lat - a.lat) * frac;
    g.lon = a.lon + (b.lon - a.lon) * frac;
    g.sog = a.sog + (b.sog - a.sog) * frac;
    g.cog = lerp_angle(a.cog, b.cog, frac);
    if (a.heading && b.heading) g.heading = lerp_angle(*a.heading, *b.heading, frac);
    g.cog_sine.reset();
    g.interpolated = true;
    out.push_back(g);
  }
  return out;
}

FilterResult filter_trajectory(const Trajectory& t, const PreprocessConfig& cfg) {
  FilterResult result;
  FilterReport& rep = result.report;
  Trajectory front = initialize_front(t, cfg.s_max);
  rep.front_truncated = t.size() - front.size();

  Trajectory& out = result.trajectory;
  out.id = t.id;
  out.meta = front.empty() ? t.meta : front.meta;
  if (front.empty()) {
    rep.discarded = true;
    return result;
  }

  const double limit = cfg.s_max.limit_for(out.meta.vessel_type);
  auto& g = out.messages;
  g.reserve(front.size());
  g.push_back(front.messages.front());

  for (std::size_t k = 1; k < front.size(); ++k) {
    AisMessage cur = front.messages[k];
    if (!valid_coordinates(cur.position())) {
      ++rep.dropped_invalid_position;
      continue;
    }
    if (std::isfinite(cur.cog)) cur.cog = normalize_degrees(cur.cog);
    if (cur.heading && std::isfinite(*cur.heading)) cur.heading = normalize_degrees(*cur.heading);

    const AisMessage& prev = g.back();
    const double dt = cur.tau - prev.tau;
    if (!(dt > 0.0)) {
      ++rep.dropped_duplicate_time;
      continue;
    }

    const bool synthetic_pair = cur.interpolated || prev.interpolated;
    if (!(cur.sog > 0.0) || cur.sog > limit) {
      cur.sog = prev.sog;
      ++rep.repaired_sog;
    }
    // Pairs touching a synthesized point were made consistent when the gap
    // was filled; re-checking them would break idempotence.
    if (!synthetic_pair) {
      const double dd = geo_distance(prev.position(), cur.position());
      if (std::abs(cur.sog - prev.sog) > cfg.s0) {
        const double expected = dt / 3600.0 * prev.sog;
        if (std::abs(dd - expected) < cfg.d0_filter) {
          cur.sog = prev.sog;
          ++rep.repaired_sog;
        }
      }

      const double nominal_step = prev.sog * cfg.t_ref / 3600.0;
      if (dt > cfg.t0 && dd > nominal_step) {
        const double segments = std::floor(dd / nominal_step);
        if (segments >= 3.0) {
          auto fill = interpolate_gap(prev, cur, static_cast<int>(segments));
          rep.interpolated_points += fill.size();
          g.insert(g.end(), fill.begin(), fill.end());
        }
      }
    }
    g.push_back(cur);
  }

  for (auto& m : g) {
    m.cog_sine = std::isfinite(m.cog) ? std::optional<double>(std::sin(deg2rad(m.cog)))
                                      : std::nullopt;
  }
  if (g.size() < std::max<std::size_t>(cfg.min_messages, 2)) rep.discarded = true;
  return result;
}

}  // namespace aispath
