#include "aispath/harness/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "aispath/domain/errors.hpp"
#include "aispath/domain/geo.hpp"

namespace aispath {

GeoPoint linear_projection(std::span<const AisMessage> last3, double horizon) {
  if (last3.size() != 3) throw DataError("linear_projection needs exactly 3 messages");
  for (std::size_t i = 1; i < 3; ++i)
    if (!(last3[i].tau > last3[i - 1].tau))
      throw DataError("linear_projection: timestamps must strictly increase");
  // work relative to the last fix so a stationary track returns it exactly
  const AisMessage& ref = last3[2];
  double t[3], dlat[3], dlon[3];
  double tm = 0.0, la = 0.0, lo = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    t[i] = last3[i].tau - ref.tau;
    dlat[i] = last3[i].lat - ref.lat;
    dlon[i] = last3[i].lon - ref.lon;
    // unwrap across the antimeridian
    if (dlon[i] > 180.0) dlon[i] -= 360.0;
    if (dlon[i] < -180.0) dlon[i] += 360.0;
    tm += t[i];
    la += dlat[i];
    lo += dlon[i];
  }
  tm /= 3.0;
  la /= 3.0;
  lo /= 3.0;
  double stt = 0.0, sla = 0.0, slo = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double dt = t[i] - tm;
    stt += dt * dt;
    sla += dt * (dlat[i] - la);
    slo += dt * (dlon[i] - lo);
  }
  const double at = horizon - tm;
  GeoPoint p{ref.lat + (la + sla / stt * at), ref.lon + (lo + slo / stt * at)};
  p.lat = std::clamp(p.lat, -90.0, 90.0);
  if (p.lon > 180.0 || p.lon < -180.0) p.lon = normalize_degrees(p.lon + 180.0) - 180.0;
  return p;
}

GeoPoint sog_cog_projection(const AisMessage& last, double horizon) {
  if (!std::isfinite(last.cog)) throw DataError("sog_cog_projection: course over ground missing");
  if (!std::isfinite(last.sog) || last.sog < 0.0)
    throw DataError("sog_cog_projection: invalid speed over ground");
  return destination(last.position(), last.cog, last.sog * horizon / 3600.0);
}

}  // namespace aispath
