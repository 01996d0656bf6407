#include "aispath/domain/validate.hpp"

#include <cmath>

#include "aispath/domain/errors.hpp"
#include "aispath/domain/geo.hpp"

namespace aispath {

VesselCategory category_of(int vessel_type) {
  if (vessel_type >= 70 && vessel_type <= 79) return VesselCategory::cargo;
  if (vessel_type >= 80 && vessel_type <= 89) return VesselCategory::tanker;
  if (vessel_type == 52) return VesselCategory::tug;
  if (vessel_type == 31 || vessel_type == 32) return VesselCategory::towing;
  return VesselCategory::other;
}

std::string_view to_string(VesselCategory c) {
  switch (c) {
    case VesselCategory::cargo: return "cargo";
    case VesselCategory::tanker: return "tanker";
    case VesselCategory::tug: return "tug";
    case VesselCategory::towing: return "towing";
    case VesselCategory::other: return "other";
  }
  return "other";
}

std::optional<VesselCategory> parse_vessel_category(std::string_view s) {
  for (auto c : {VesselCategory::cargo, VesselCategory::tanker, VesselCategory::tug,
                 VesselCategory::towing, VesselCategory::other}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

double SpeedLimits::limit_for(int vessel_type) const {
  if (auto it = caps.find(category_of(vessel_type)); it != caps.end()) return it->second;
  if (auto it = caps.find(VesselCategory::other); it != caps.end()) return it->second;
  return 50.0;
}

void SpeedLimits::validate() const {
  for (const auto& [cat, cap] : caps) {
    if (!(cap > 0.0)) {
      throw ConfigError("s_max for " + std::string(to_string(cat)) + " must be positive");
    }
  }
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::none: return "none";
    case RejectReason::latitude: return "latitude out of range";
    case RejectReason::longitude: return "longitude out of range";
    case RejectReason::speed: return "speed out of range";
  }
  return "unknown";
}

ValidationResult validate_message(const AisMessage& raw, const SpeedLimits& limits) {
  // NaN fails every comparison, so these also reject missing values.
  if (!(raw.lat >= -90.0 && raw.lat <= 90.0)) return {std::nullopt, RejectReason::latitude};
  if (!(raw.lon >= -180.0 && raw.lon <= 180.0)) return {std::nullopt, RejectReason::longitude};
  if (!(raw.sog > 0.0 && raw.sog <= limits.limit_for(raw.meta.vessel_type))) {
    return {std::nullopt, RejectReason::speed};
  }
  AisMessage m = raw;
  if (std::isfinite(m.cog)) m.cog = normalize_degrees(m.cog);
  if (m.heading && std::isfinite(*m.heading)) m.heading = normalize_degrees(*m.heading);
  return {m, RejectReason::none};
}

}  // namespace aispath
